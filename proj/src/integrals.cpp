#include "grw/integrals.hpp"

#include <cmath>

namespace grw {

namespace {

inline double pow_n(double x, int n) { return n == 1 ? x : x * x; }

}  // namespace

double surface_integral(const FiberGrid& grid, const GraphState& s, const Field& f) {
  int total = grid.nodes();
  if ((int)f.size() != total) throw std::domain_error("field size does not match grid");
  CompensatedSum acc;
  for (int k = 0; k < total; ++k)
    acc.add(grid.weights[k] * pow_n(s.th[k], grid.n) * s.v[k] * f[k]);
  return acc.value();
}

double area(const FiberGrid& grid, const GraphState& s) {
  int total = grid.nodes();
  CompensatedSum acc;
  for (int k = 0; k < total; ++k)
    acc.add(grid.weights[k] * pow_n(s.th[k], grid.n) * s.v[k]);
  return acc.value();
}

double enclosed_volume(const FiberGrid& grid, const WarpingFactor& w, const GraphState& s) {
  int total = grid.nodes();
  CompensatedSum acc;
  for (int k = 0; k < total; ++k)
    acc.add(grid.weights[k] * warped_volume_integral(w, s.rho[k], grid.n));
  return acc.value();
}

double oscillation(const FiberGrid& grid, const WarpingFactor& w, const GraphState& s) {
  (void)grid;
  return theta(w, s.max_rho) - theta(w, s.min_rho);
}

double area_rate_prediction(const FiberGrid& grid, const GraphState& s) {
  if (!s.full) throw std::logic_error("area rate needs a full graph state");
  int total = grid.nodes();
  CompensatedSum acc;
  for (int k = 0; k < total; ++k) {
    double H = s.H[k];
    double term = H * H * s.u[k] - grid.n * s.thp[k] * H;
    acc.add(grid.weights[k] * pow_n(s.th[k], grid.n) * s.v[k] * term);
  }
  return acc.value();
}

double umbilicity_deficit(const FiberGrid& grid, const GraphState& s) {
  if (!s.full) throw std::logic_error("umbilicity deficit needs a full graph state");
  int total = grid.nodes();
  CompensatedSum acc;
  for (int k = 0; k < total; ++k)
    acc.add(grid.weights[k] * pow_n(s.th[k], grid.n) * s.v[k] * s.ringA2[k] * s.u[k]);
  return acc.value();
}

double area_rate_lower_bound(const FiberGrid& grid, const GraphState& s) {
  if (grid.n < 2)
    throw std::domain_error("area rate lower bound needs fiber dimension >= 2");
  double n = grid.n;
  return n / (n - 1.0) * umbilicity_deficit(grid, s);
}

double integral_dtheta(const FiberGrid& grid, const GraphState& s) {
  return surface_integral(grid, s, s.dtheta_div);
}

}  // namespace grw
