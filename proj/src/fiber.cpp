#include "grw/fiber.hpp"

#include <cmath>
#include <stdexcept>

namespace grw {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

FiberGrid FiberGrid::torus1(int N, double L) {
  if (N < 8) throw std::domain_error("torus1 needs at least 8 nodes");
  if (!(L > 0.0)) throw std::domain_error("torus1 period must be positive");
  FiberGrid g;
  g.kind = FiberKind::torus1;
  g.n = 1;
  g.n1 = N;
  g.n2 = 1;
  g.L1 = L;
  g.h1 = L / N;
  g.lambda_hat = 0.0;
  g.coord1.resize(N);
  for (int i = 0; i < N; ++i) g.coord1[i] = i * g.h1;
  g.coord2 = {0.0};
  g.weights.assign(N, g.h1);
  g.ghat11.assign(N, 1.0);
  g.ghat22.assign(N, 0.0);  // unused in 1-d
  return g;
}

FiberGrid FiberGrid::torus2(int N1, int N2, double L1, double L2) {
  if (N1 < 8 || N2 < 8) throw std::domain_error("torus2 needs at least 8 nodes per direction");
  if (!(L1 > 0.0) || !(L2 > 0.0)) throw std::domain_error("torus2 periods must be positive");
  FiberGrid g;
  g.kind = FiberKind::torus2;
  g.n = 2;
  g.n1 = N1;
  g.n2 = N2;
  g.L1 = L1;
  g.L2 = L2;
  g.h1 = L1 / N1;
  g.h2 = L2 / N2;
  g.lambda_hat = 0.0;
  g.coord1.resize(N1);
  g.coord2.resize(N2);
  for (int i = 0; i < N1; ++i) g.coord1[i] = i * g.h1;
  for (int j = 0; j < N2; ++j) g.coord2[j] = j * g.h2;
  g.weights.assign(N1 * N2, g.h1 * g.h2);
  g.ghat11.assign(N1 * N2, 1.0);
  g.ghat22.assign(N1 * N2, 1.0);
  return g;
}

FiberGrid FiberGrid::sphere2_axisym(int N) {
  if (N < 8) throw std::domain_error("sphere2_axisym needs at least 8 nodes");
  FiberGrid g;
  g.kind = FiberKind::sphere2_axisym;
  g.n = 2;
  g.n1 = N;
  g.n2 = 1;
  g.L1 = kPi;
  g.h1 = kPi / N;
  g.lambda_hat = 1.0;  // unit 2-sphere
  g.coord1.resize(N);
  g.weights.resize(N);
  g.ghat11.assign(N, 1.0);
  g.ghat22.resize(N);
  // midpoint nodes in theta; the weight of node j is the exact area of its
  // latitude band, 2 pi (cos theta_{j-1/2} - cos theta_{j+1/2}), written as
  // 4 pi sin(theta_j) sin(h/2) so the weights sum to 4 pi up to round-off
  double half = std::sin(0.5 * g.h1);
  for (int j = 0; j < N; ++j) {
    double th = (j + 0.5) * g.h1;
    g.coord1[j] = th;
    double s = std::sin(th);
    g.weights[j] = 4.0 * kPi * s * half;
    g.ghat22[j] = s * s;
  }
  g.coord2 = {0.0};
  return g;
}

void partial(const FiberGrid& grid, const Field& f, int dir, Parity parity, Field& out) {
  int total = grid.nodes();
  if ((int)f.size() != total) throw std::domain_error("field size does not match grid");
  if (dir < 0 || dir >= grid.grid_dims())
    throw std::domain_error("derivative direction out of range for this grid");
  out.resize(total);
  double fault = grid.stencil_fault;

  if (grid.kind == FiberKind::torus1) {
    int N = grid.n1;
    double inv2h = 1.0 / (2.0 * grid.h1);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N; ++i) {
      int ip = i + 1 == N ? 0 : i + 1;
      int im = i == 0 ? N - 1 : i - 1;
      out[i] = (f[ip] - f[im]) * inv2h + fault * f[i];
    }
    return;
  }

  if (grid.kind == FiberKind::torus2) {
    int N1 = grid.n1, N2 = grid.n2;
    if (dir == 0) {
      double inv2h = 1.0 / (2.0 * grid.h1);
#pragma omp parallel for schedule(static)
      for (int i = 0; i < N1; ++i) {
        int ip = i + 1 == N1 ? 0 : i + 1;
        int im = i == 0 ? N1 - 1 : i - 1;
        for (int j = 0; j < N2; ++j) {
          int k = i * N2 + j;
          out[k] = (f[ip * N2 + j] - f[im * N2 + j]) * inv2h + fault * f[k];
        }
      }
    } else {
      double inv2h = 1.0 / (2.0 * grid.h2);
#pragma omp parallel for schedule(static)
      for (int i = 0; i < N1; ++i) {
        for (int j = 0; j < N2; ++j) {
          int jp = j + 1 == N2 ? 0 : j + 1;
          int jm = j == 0 ? N2 - 1 : j - 1;
          int k = i * N2 + j;
          out[k] = (f[i * N2 + jp] - f[i * N2 + jm]) * inv2h + fault * f[k];
        }
      }
    }
    return;
  }

  // sphere2_axisym: midpoint nodes, ghost of node -1 reflects node 0 across
  // theta = 0 (and likewise at theta = pi); even fields copy, odd fields flip
  int N = grid.n1;
  double inv2h = 1.0 / (2.0 * grid.h1);
  double sgn = parity == Parity::even ? 1.0 : -1.0;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < N; ++j) {
    double fp = j + 1 < N ? f[j + 1] : sgn * f[N - 1];
    double fm = j > 0 ? f[j - 1] : sgn * f[0];
    out[j] = (fp - fm) * inv2h + fault * f[j];
  }
}

Field partial(const FiberGrid& grid, const Field& f, int dir, Parity parity) {
  Field out;
  partial(grid, f, dir, parity, out);
  return out;
}

double fiber_volume(const FiberGrid& grid) {
  CompensatedSum s;
  for (double w : grid.weights) s.add(w);
  return s.value();
}

}  // namespace grw
