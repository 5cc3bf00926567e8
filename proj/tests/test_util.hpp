#pragma once

#include <cmath>
#include <random>

#include "grw/fiber.hpp"
#include "grw/warping.hpp"

namespace testutil {

inline constexpr double kPi = 3.14159265358979323846;

// smooth random graphs, amplitudes tapered so the graphs stay uniformly
// spacelike for every warping family used in the tests

inline grw::Field random_graph_torus1(const grw::FiberGrid& g, double r0, double amp,
                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double a1 = amp * unit(rng), a2 = 0.5 * amp * unit(rng), a3 = amp / 3.0 * unit(rng);
  double p1 = kPi * unit(rng), p2 = kPi * unit(rng), p3 = kPi * unit(rng);
  grw::Field rho(g.nodes());
  for (int i = 0; i < g.n1; ++i) {
    double x = 2.0 * kPi * g.coord1[i] / g.L1;
    rho[i] = r0 + a1 * std::sin(x + p1) + a2 * std::sin(2.0 * x + p2) +
             a3 * std::sin(3.0 * x + p3);
  }
  return rho;
}

inline grw::Field random_graph_torus2(const grw::FiberGrid& g, double r0, double amp,
                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double a1 = amp * unit(rng), a2 = amp * unit(rng), a3 = 0.5 * amp * unit(rng);
  double p1 = kPi * unit(rng), p2 = kPi * unit(rng), p3 = kPi * unit(rng), p4 = kPi * unit(rng);
  grw::Field rho(g.nodes());
  for (int i = 0; i < g.n1; ++i) {
    double x = 2.0 * kPi * g.coord1[i] / g.L1;
    for (int j = 0; j < g.n2; ++j) {
      double y = 2.0 * kPi * g.coord2[j] / g.L2;
      rho[g.idx(i, j)] = r0 + a1 * std::sin(x + p1) + a2 * std::sin(y + p2) +
                         a3 * std::sin(x + p3) * std::sin(y + p4);
    }
  }
  return rho;
}

inline grw::Field random_graph_sphere(const grw::FiberGrid& g, double r0, double amp,
                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double a1 = amp * unit(rng), a2 = 0.5 * amp * unit(rng), a3 = amp / 3.0 * unit(rng);
  grw::Field rho(g.nodes());
  for (int j = 0; j < g.n1; ++j) {
    double t = g.coord1[j];
    rho[j] = r0 + a1 * std::cos(t) + a2 * std::cos(2.0 * t) + a3 * std::cos(3.0 * t);
  }
  return rho;
}

inline grw::Field random_graph(const grw::FiberGrid& g, double r0, double amp,
                               std::mt19937_64& rng) {
  switch (g.kind) {
    case grw::FiberKind::torus1:
      return random_graph_torus1(g, r0, amp, rng);
    case grw::FiberKind::torus2:
      return random_graph_torus2(g, r0, amp, rng);
    default:
      return random_graph_sphere(g, r0, amp, rng);
  }
}

}  // namespace testutil
