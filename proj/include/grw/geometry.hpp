#pragma once

#include <array>

#include "grw/fiber.hpp"
#include "grw/warping.hpp"

namespace grw {

// How much of the state a build fills in.  The flow only needs the metric
// block and the divergence-form Laplacian of Theta; curvature fields are
// filled on demand for diagnostics and recording.
enum class BuildLevel { flow, full };

// Discrete geometry of the spacelike graph r = rho(xi) inside
// -dr^2 + vartheta^2(r) ghat.  All fields are per-node, row-major.
//
// Conventions: nu is the future-directed unit timelike normal,
// v^2 = 1 - vartheta^{-2} |d rho|^2_ghat in (0,1], u = vartheta / v is the
// support function, and the second fundamental form is taken with respect to
// -nu so that coordinate slices of increasing vartheta have H > 0:
//   h_ij = v (Hess_ij rho + vartheta vartheta' ghat_ij).
struct GraphState {
  Field rho;
  Field d1rho, d2rho;  // d rho components (d2rho only for torus2)
  Field th, thp, thpp; // vartheta(rho) and derivatives (thp/thpp at full level)
  Field theta_f;       // Theta(rho), full level
  Field v2, v, u;
  // induced metric; for the axisymmetric sphere g11 = g_theta.theta and
  // g22 = g_phi.phi, for torus1 only g11 is used
  Field g11, g12, g22;
  Field inv11, inv12, inv22;
  Field detg, sqrtg;
  Field c11, c12, c22;  // flux coefficients sqrt(det g) g^{ij} vartheta
                        // (sphere: c11 holds vartheta/v; faces carry the sin factor)
  Field dtheta_div;     // divergence-form Laplacian of Theta on the graph
  Field dtheta_trace;   // u H - n vartheta', full level
  // Christoffel symbols of g (full level).  torus2 uses all six slots;
  // torus1 uses G111; the sphere stores G111 = Gamma^t_tt, G122 = Gamma^t_pp,
  // G212 = Gamma^p_tp.
  Field G111, G112, G122, G211, G212, G222;
  Field h11, h12, h22;  // second fundamental form (slots mirror the metric's)
  Field H, normA2, ringA2;
  double min_v2 = 1.0, max_u = 0.0, min_rho = 0.0, max_rho = 0.0;
  bool full = false;
};

// Metric block: d rho, v, u, g, g^{-1}, det g, flux coefficients, plus the
// min/max scalars.  Throws SpacelikeViolation when v^2 <= eps_v at some node.
void induced_metric(const FiberGrid& grid, const WarpingFactor& w, const Field& rho,
                    GraphState& s, double eps_v = 1e-4);

// Christoffel symbols (centered differences of the discrete metric), Hessian
// of rho, h, H, |A|^2 and the trace-free part |ringA|^2.
void second_fundamental_form(const FiberGrid& grid, const WarpingFactor& w, GraphState& s);

// Divergence form (flux over faces, exact summation by parts) and trace form
// u H - n vartheta'.  The divergence form is filled by induced_metric's
// companion pass; this also fills the trace form (needs H).
void laplace_theta_div(const FiberGrid& grid, GraphState& s);
void laplace_theta_trace(const FiberGrid& grid, const WarpingFactor& w, GraphState& s);

// Everything needed at the requested level, in the right order.
void build_graph_state(const FiberGrid& grid, const WarpingFactor& w, const Field& rho,
                       GraphState& s, BuildLevel level, double eps_v = 1e-4);
GraphState build_graph_state(const FiberGrid& grid, const WarpingFactor& w, const Field& rho,
                             BuildLevel level = BuildLevel::full, double eps_v = 1e-4);

// Closed-form ambient curvature contractions on the graph:
//   ric_grad_theta_nu = Ric(grad Theta, nu) = mu(rho) (1-v^2) / (v^3 vartheta)
//   ric_ww            = Ric(W,W)            = ric_grad_theta_nu / u
// where W is the null direction carrying the convergence-condition argument;
// both vanish identically where the graph is tangent to a slice (v = 1).
void ambient_ricci_terms(const FiberGrid& grid, const WarpingFactor& w, const GraphState& s,
                         Field& ric_grad_theta_nu, Field& ric_ww);

// Shape-operator eigenvalues at one node, ascending.
std::array<double, 2> principal_curvatures(const FiberGrid& grid, const GraphState& s, int node);

// | int (2 sigma_2 u - (n-1) vartheta' H) - int Ric(grad Theta, nu) |, the
// divergence-theorem identity for the second symmetric curvature function.
// Zero in the continuum; O(h^2) discretely.  Trivially zero for n = 1.
double sigma2_integral_residual(const FiberGrid& grid, const WarpingFactor& w,
                                const GraphState& s);

// Laplace-Beltrami of a scalar grid field in conservative (flux) form, using
// the state's metric.  Shares the face construction with dtheta_div.
void laplace_beltrami(const FiberGrid& grid, const GraphState& s, const Field& f, Field& out);

}  // namespace grw
