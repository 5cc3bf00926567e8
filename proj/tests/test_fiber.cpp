#include <cmath>

#include "doctest.h"
#include "grw/fiber.hpp"

using namespace grw;

namespace {
constexpr double kPi = 3.14159265358979323846;

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}
}  // namespace

TEST_SUITE("fiber") {
  TEST_CASE("torus weights sum to the fiber volume") {
    auto g1 = FiberGrid::torus1(64, 2.0 * kPi);
    CHECK(fiber_volume(g1) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    auto g2 = FiberGrid::torus2(32, 48, 2.0 * kPi, 3.0);
    CHECK(fiber_volume(g2) == doctest::Approx(6.0 * kPi).epsilon(1e-14));
  }

  TEST_CASE("sphere band weights sum to 4 pi exactly") {
    for (int N : {16, 64, 128}) {
      auto g = FiberGrid::sphere2_axisym(N);
      CHECK(std::abs(fiber_volume(g) - 4.0 * kPi) < 1e-12 * 4.0 * kPi);
    }
  }

  TEST_CASE("torus1 derivative converges at second order") {
    double err[2];
    int Ns[2] = {32, 64};
    for (int t = 0; t < 2; ++t) {
      auto g = FiberGrid::torus1(Ns[t], 2.0 * kPi);
      Field f(g.n1), exact(g.n1);
      for (int i = 0; i < g.n1; ++i) {
        f[i] = std::sin(g.coord1[i]);
        exact[i] = std::cos(g.coord1[i]);
      }
      err[t] = max_abs_diff(partial(g, f, 0), exact);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
  }

  TEST_CASE("torus2 derivatives along both directions") {
    auto g = FiberGrid::torus2(24, 36, 2.0 * kPi, 2.0 * kPi);
    Field f(g.nodes());
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j)
        f[g.idx(i, j)] = std::sin(g.coord1[i]) * std::cos(g.coord2[j]);
    Field d1 = partial(g, f, 0), d2 = partial(g, f, 1);
    double e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) {
        int k = g.idx(i, j);
        e1 = std::max(e1, std::abs(d1[k] - std::cos(g.coord1[i]) * std::cos(g.coord2[j])));
        e2 = std::max(e2, std::abs(d2[k] + std::sin(g.coord1[i]) * std::sin(g.coord2[j])));
      }
    CHECK(e1 < 1.2e-2);  // k^3 h^2 / 6 with h = 2 pi / 24
    CHECK(e2 < 5.5e-3);
  }

  TEST_CASE("sphere derivatives honor parity at the poles") {
    double errE[2], errO[2];
    int Ns[2] = {48, 96};
    for (int t = 0; t < 2; ++t) {
      auto g = FiberGrid::sphere2_axisym(Ns[t]);
      Field fe(g.n1), fo(g.n1), de(g.n1), dox(g.n1);
      for (int j = 0; j < g.n1; ++j) {
        double th = g.coord1[j];
        fe[j] = std::cos(th);
        de[j] = -std::sin(th);
        fo[j] = 0.5 * std::sin(2.0 * th);
        dox[j] = std::cos(2.0 * th);
      }
      errE[t] = max_abs_diff(partial(g, fe, 0, Parity::even), de);
      errO[t] = max_abs_diff(partial(g, fo, 0, Parity::odd), dox);
    }
    CHECK(errE[0] / errE[1] == doctest::Approx(4.0).epsilon(0.15));
    CHECK(errO[0] / errO[1] == doctest::Approx(4.0).epsilon(0.15));
  }

  TEST_CASE("stencil fault hook perturbs derivatives") {
    auto g = FiberGrid::torus1(32, 2.0 * kPi);
    Field f(g.n1);
    for (int i = 0; i < g.n1; ++i) f[i] = std::sin(g.coord1[i]);
    Field clean = partial(g, f, 0);
    g.stencil_fault = 1e-3;
    Field dirty = partial(g, f, 0);
    CHECK(max_abs_diff(clean, dirty) > 1e-5);
  }

  TEST_CASE("factory validation") {
    CHECK_THROWS_AS(FiberGrid::torus1(4, 1.0), std::domain_error);
    CHECK_THROWS_AS(FiberGrid::torus1(32, -1.0), std::domain_error);
    CHECK_THROWS_AS(FiberGrid::torus2(4, 32, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(FiberGrid::sphere2_axisym(4), std::domain_error);
    auto g = FiberGrid::torus2(16, 8, 1.0, 2.0);
    CHECK(g.nodes() == 128);
    CHECK(g.idx(3, 5) == 3 * 8 + 5);
    CHECK(g.grid_dims() == 2);
    CHECK(FiberGrid::sphere2_axisym(16).grid_dims() == 1);
    CHECK(FiberGrid::sphere2_axisym(16).n == 2);
    Field bad(7, 0.0);
    CHECK_THROWS_AS(partial(g, bad, 0), std::domain_error);
    CHECK_THROWS_AS(partial(g, Field(g.nodes(), 0.0), 2), std::domain_error);
  }
}
