#include "grw/isoperimetric.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace grw {

namespace {

double pow_n(double x, int n) { return n == 1 ? x : x * x; }

double slab_edge(const WarpingFactor& w) { return w.b - 1e-15 * (w.b - w.a); }

}  // namespace

double WarpedProfile::volume_of_slice(double r) const {
  return fiber_vol * warped_volume_integral(w, r, n);
}

double WarpedProfile::area_of_slice(double r) const {
  return fiber_vol * pow_n(vartheta(w, r), n);
}

double WarpedProfile::slice_for_volume(double V) const {
  if (V < 0.0) throw std::domain_error("enclosed volume is negative");
  double tol = 1e-12 * std::max(V, 1.0);
  if (V <= tol) return w.a;
  double lo = w.a, hi = slab_edge(w);
  if (volume_of_slice(hi) < V)
    throw std::domain_error("no slice inside the slab holds this volume");
  double R = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double F = volume_of_slice(R) - V;
    if (std::abs(F) <= tol) break;
    if (F > 0.0)
      hi = R;
    else
      lo = R;
    double Rn = R - F / area_of_slice(R);
    R = (Rn > lo && Rn < hi) ? Rn : 0.5 * (lo + hi);
  }
  return R;
}

double WarpedProfile::phi(double V) const { return area_of_slice(slice_for_volume(V)); }

WarpedProfile make_profile(const FiberGrid& grid, const WarpingFactor& w) {
  WarpedProfile P;
  P.w = w;
  P.n = grid.n;
  CompensatedSum fv;
  for (int k = 0; k < grid.nodes(); ++k) fv.add(grid.weights[k]);
  P.fiber_vol = fv.value();
  return P;
}

double ncc_scan(const WarpingFactor& w, double lambda_hat, int n) {
  const int samples = 4096;
  double span = w.b - w.a;
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    double r = w.a + (i + 0.5) * span / samples;
    m = std::min(m, ncc_margin(w, r, lambda_hat, n));
  }
  return m;
}

IsoperimetricReport isoperimetric_check(const FiberGrid& grid, const WarpingFactor& w,
                                        const GraphState& s, double slack_tol) {
  if (!s.full)
    throw std::logic_error("isoperimetric check needs a full graph state");
  IsoperimetricReport rep;
  rep.ncc_min = ncc_scan(w, grid.lambda_hat, grid.n);
  rep.applicable = rep.ncc_min >= -1e-10;
  rep.volume = enclosed_volume(grid, w, s);
  rep.area = area(grid, s);

  WarpedProfile P = make_profile(grid, w);
  rep.slice_r = P.slice_for_volume(rep.volume);
  rep.phi_of_volume = P.area_of_slice(rep.slice_r);
  rep.slack = rep.phi_of_volume - rep.area;

  double mring = 0.0, mtilt = 0.0;
  for (int k = 0; k < grid.nodes(); ++k) {
    mring = std::max(mring, s.ringA2[k]);
    mtilt = std::max(mtilt, 1.0 - s.v2[k]);
  }
  rep.max_ring_a2 = mring;
  rep.max_one_minus_v2 = mtilt;

  if (!rep.applicable)
    rep.verdict = "not_applicable";
  else if (rep.slack >= -slack_tol * rep.area)
    rep.verdict = "pass";
  else
    rep.verdict = "fail";
  return rep;
}

}  // namespace grw
