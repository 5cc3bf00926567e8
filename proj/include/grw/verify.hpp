#pragma once

#include <functional>
#include <string>
#include <vector>

#include "grw/geometry.hpp"

namespace grw {

// Finite-difference curvature of the ambient metric -dr^2 + vartheta^2 ghat
// in coordinates (r, xi1[, xi2]).  Independent of the graph discretization:
// metric components are closed-form, derivatives use fourth-order stencils
// with step delta, Christoffel symbols are assembled at displaced points and
// differentiated again.  Used as the reference the closed-form curvature
// expressions are checked against.
struct CurvatureOracle {
  WarpingFactor w;
  FiberKind kind = FiberKind::torus1;
  double delta = 1e-2;

  int dim() const { return kind == FiberKind::torus1 ? 2 : 3; }

  void metric(const double* p, double g[3][3]) const;
  void inverse_metric(const double* p, double gi[3][3]) const;
  // G[a][b][c] = Gamma^a_{bc}
  void christoffel(const double* p, double G[3][3][3]) const;
  // R[a][b][m][n] = R^a_{b m n} = d_m Gamma^a_{n b} - d_n Gamma^a_{m b}
  //                + Gamma^a_{m l} Gamma^l_{n b} - Gamma^a_{n l} Gamma^l_{m b}
  void riemann(const double* p, double R[3][3][3][3]) const;
  void ricci(const double* p, double ric[3][3]) const;
  double ricci_vec(const double* p, const double* X, const double* Y) const;
  // max violation of the (m,n) antisymmetry and the first Bianchi identity
  double self_test(const double* p) const;
};

// Closed-form ambient Ricci tensor of the warped product at p.
void ambient_ricci_closed(const WarpingFactor& w, FiberKind kind, double lambda_hat,
                          const double* p, double ric[3][3]);

// Sup norms of the discrete residuals of identities between surface
// quantities of one graph state.  All O(h^2) for smooth graphs.
struct SpatialResiduals {
  double grad_u = 0.0;      // d_i u = h_ij g^{jk} vartheta d_k rho
  double laplace_u = 0.0;   // LB u = g(grad H, grad Theta) + |A|^2 u + Ric(grad Theta, nu) - vartheta' H
  double sigma2 = 0.0;      // integral identity for the second symmetric function
  double grad_theta2 = 0.0; // |grad Theta|^2 = u^2 - vartheta^2
  double trace_div = 0.0;   // trace form vs divergence form of Laplace Theta
};
SpatialResiduals spatial_residuals(const FiberGrid& grid, const WarpingFactor& w,
                                   const GraphState& s);

// Residuals of the evolution laws along the flow, measured on marker
// trajectories advanced with the normal velocity field through two steps and
// compared by centered differences at the middle time.
struct EvolutionResiduals {
  double theta_law = 0.0;  // d Theta / dt = u LaplaceTheta
  double g_law = 0.0;      // d g(D,D) / dt = 2 LaplaceTheta h(D,D) on advected gaps
  double nu_law = 0.0;     // covariant d nu / dt = u grad H + H grad u - n (vartheta''/vartheta) grad Theta
  double u_law = 0.0;      // d u / dt - u LB u = forcing terms
};
EvolutionResiduals evolution_residuals(const FiberGrid& grid, const WarpingFactor& w,
                                       const Field& rho0, double cfl = 0.2,
                                       double eps_v = 1e-4);

struct VerifyOptions {
  int points = 20;        // oracle sample points
  unsigned seed = 42;
  double delta = 1e-2;    // oracle stencil step
  double oracle_tol = 1e-6;
  double selftest_tol = 1e-8;
  double min_spatial_order = 1.8;   // required refinement order, spatial identities
  double min_marker_decay = 1.3;    // required residual ratio per refinement, marker laws
  double cfl = 0.2;
  double eps_v = 1e-4;
};

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool is_upper_bound = true;  // pass iff value <= threshold (else value >= threshold)
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool pass = true;
};

// Runs the whole battery on a family: oracle self test, closed-form ambient
// curvature against the oracle, the graph-level Ricci contraction against the
// oracle, and refinement orders of the spatial and evolution residuals over
// the given grids (coarse to fine, same initial graph family via graph_of).
VerifyReport run_verification(const std::vector<FiberGrid>& grids, const WarpingFactor& w,
                              const std::function<Field(const FiberGrid&)>& graph_of,
                              const VerifyOptions& opt);

}  // namespace grw
