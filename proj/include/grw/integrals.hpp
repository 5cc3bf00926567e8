#pragma once

#include "grw/geometry.hpp"

namespace grw {

// Quadrature over the graph hypersurface.  The induced area element is
// vartheta(rho)^n v d(omega_ghat), so every integral below reduces to a
// weighted node sum.  All reductions run serially through CompensatedSum in
// fixed node order, which keeps results byte-identical across thread counts.

// int f d(omega_g)
double surface_integral(const FiberGrid& grid, const GraphState& s, const Field& f);

// |Sigma| = int d(omega_g)
double area(const FiberGrid& grid, const GraphState& s);

// vol(Sigma_hat) = int ( int_a^rho vartheta^n dr ) d(omega_ghat), the Lorentzian
// volume enclosed between the graph and the left slab boundary.  Throws
// std::domain_error if rho leaves [a, b).
double enclosed_volume(const FiberGrid& grid, const WarpingFactor& w, const GraphState& s);

// osc = Theta(max rho) - Theta(min rho); zero exactly on coordinate slices
double oscillation(const FiberGrid& grid, const WarpingFactor& w, const GraphState& s);

// d|Sigma|/dt along the flow: int (H^2 u - n vartheta' H) d(omega_g).
// Needs a full graph state.
double area_rate_prediction(const FiberGrid& grid, const GraphState& s);

// int |ringA|^2 u d(omega_g), the umbilicity deficit driving the area growth
double umbilicity_deficit(const FiberGrid& grid, const GraphState& s);

// (n/(n-1)) int |ringA|^2 u d(omega_g); only defined for n >= 2
double area_rate_lower_bound(const FiberGrid& grid, const GraphState& s);

// int LaplaceTheta d(omega_g) in divergence form; telescopes to round-off
double integral_dtheta(const FiberGrid& grid, const GraphState& s);

}  // namespace grw
