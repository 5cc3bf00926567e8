#pragma once

#include "grw/types.hpp"

namespace grw {

enum class FiberKind { torus1, torus2, sphere2_axisym };

// Ghost-cell reflection rule across the sphere poles: scalars extend evenly,
// covector components (anything built from an odd number of theta-derivatives)
// extend oddly.  Periodic grids ignore the parity.
enum class Parity { even, odd };

// Sampled compact fiber.  Nodes are stored row-major, idx = i1*n2 + i2, with
// the first index along coord1.  Supported charts all have diagonal ghat.
struct FiberGrid {
  FiberKind kind = FiberKind::torus1;
  int n = 1;        // fiber dimension
  int n1 = 0;       // grid extent along the first (or only) direction
  int n2 = 1;       // grid extent along the second direction (1 for 1-d grids)
  double L1 = 0.0;  // torus period / theta extent (pi for the sphere)
  double L2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double lambda_hat = 0.0;  // Ric_ghat >= lambda_hat * ghat, attained for these fibers
  Field coord1, coord2;     // node coordinates per direction
  Field weights;            // per-node quadrature weights for int d omega_ghat
  Field ghat11, ghat22;     // per-node fiber metric components (ghat12 = 0 here)
  double stencil_fault = 0.0;  // test hook: corrupts difference stencils when nonzero

  int nodes() const { return n1 * n2; }
  int idx(int i, int j) const { return i * n2 + j; }
  // number of grid directions (the axisymmetric sphere is 1-d in theta)
  int grid_dims() const { return kind == FiberKind::torus2 ? 2 : 1; }

  static FiberGrid torus1(int N, double L);
  static FiberGrid torus2(int N1, int N2, double L1, double L2);
  static FiberGrid sphere2_axisym(int N);
};

// Centered second-order difference along direction dir (0 or 1).  Periodic
// wrap on tori; parity-reflected ghosts across the sphere poles.
void partial(const FiberGrid& grid, const Field& f, int dir, Parity parity, Field& out);
Field partial(const FiberGrid& grid, const Field& f, int dir, Parity parity = Parity::even);

// sum of quadrature weights = |fiber|
double fiber_volume(const FiberGrid& grid);

}  // namespace grw
