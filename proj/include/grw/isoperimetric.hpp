#pragma once

#include <string>

#include "grw/integrals.hpp"

namespace grw {

// Profile of the warped product: slices r = const enclose volume
// f0(r) = |F| int_a^r vartheta^n and have area f1(r) = |F| vartheta^n(r),
// where |F| is the fiber volume.  phi = f1 o f0^{-1} maps an enclosed volume
// to the area of the slice holding that volume.
struct WarpedProfile {
  WarpingFactor w;
  double fiber_vol = 0.0;
  int n = 1;

  double volume_of_slice(double r) const;
  double area_of_slice(double r) const;
  // inverse of volume_of_slice on [a, b); bisection bracket, Newton polish
  double slice_for_volume(double V) const;
  double phi(double V) const;
};

WarpedProfile make_profile(const FiberGrid& grid, const WarpingFactor& w);

// Slack of the slice comparison: phi(vol) - area.  Nonnegative for every
// spacelike graph when the ambient Ricci curvature is nonnegative on null
// directions, zero exactly on slices.
struct IsoperimetricReport {
  bool applicable = false;    // null convergence condition holds on the slab
  double ncc_min = 0.0;       // min of the margin over the slab scan
  double volume = 0.0;
  double area = 0.0;
  double phi_of_volume = 0.0;
  double slack = 0.0;         // phi(volume) - area
  double slice_r = 0.0;       // radius of the volume-matching slice
  double max_ring_a2 = 0.0;   // equality diagnostics: trace free part of A
  double max_one_minus_v2 = 0.0;  // and tilt of the graph
  std::string verdict;        // pass | fail | not_applicable
};

// slack_tol is relative to the area
IsoperimetricReport isoperimetric_check(const FiberGrid& grid, const WarpingFactor& w,
                                        const GraphState& s, double slack_tol = 1e-8);

// min over ~4k slab samples of the null convergence margin
double ncc_scan(const WarpingFactor& w, double lambda_hat, int n);

}  // namespace grw
