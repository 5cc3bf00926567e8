#include <cmath>
#include <random>

#include "doctest.h"
#include "grw/geometry.hpp"
#include "grw/geometry_ref.hpp"
#include "grw/integrals.hpp"
#include "test_util.hpp"

using namespace grw;
using testutil::kPi;

namespace {

void check_field(const Field& a, const Field& b, double tol, const char* what) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    double scale = 1.0 + std::max(std::abs(a[k]), std::abs(b[k]));
    worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
  }
  INFO("field ", what, " worst scaled mismatch ", worst);
  CHECK(worst <= tol);
}

void compare_states(const FiberGrid& g, const GraphState& a, const GraphState& b,
                    double tol) {
  check_field(a.d1rho, b.d1rho, tol, "d1rho");
  check_field(a.th, b.th, tol, "th");
  check_field(a.thp, b.thp, tol, "thp");
  check_field(a.thpp, b.thpp, tol, "thpp");
  check_field(a.theta_f, b.theta_f, tol, "theta_f");
  check_field(a.v2, b.v2, tol, "v2");
  check_field(a.v, b.v, tol, "v");
  check_field(a.u, b.u, tol, "u");
  check_field(a.g11, b.g11, tol, "g11");
  check_field(a.inv11, b.inv11, tol, "inv11");
  check_field(a.detg, b.detg, tol, "detg");
  check_field(a.sqrtg, b.sqrtg, tol, "sqrtg");
  check_field(a.c11, b.c11, tol, "c11");
  check_field(a.dtheta_div, b.dtheta_div, tol, "dtheta_div");
  check_field(a.dtheta_trace, b.dtheta_trace, tol, "dtheta_trace");
  check_field(a.h11, b.h11, tol, "h11");
  check_field(a.H, b.H, tol, "H");
  check_field(a.normA2, b.normA2, tol, "normA2");
  check_field(a.ringA2, b.ringA2, tol, "ringA2");
  if (g.kind == FiberKind::torus2) {
    check_field(a.d2rho, b.d2rho, tol, "d2rho");
    check_field(a.g12, b.g12, tol, "g12");
    check_field(a.inv12, b.inv12, tol, "inv12");
    check_field(a.c12, b.c12, tol, "c12");
    check_field(a.c22, b.c22, tol, "c22");
    check_field(a.h12, b.h12, tol, "h12");
  }
  if (g.n == 2) {
    check_field(a.g22, b.g22, tol, "g22");
    check_field(a.inv22, b.inv22, tol, "inv22");
    check_field(a.h22, b.h22, tol, "h22");
  }
}

FiberGrid grid_of(FiberKind kind, int N) {
  switch (kind) {
    case FiberKind::torus1:
      return FiberGrid::torus1(N, 2.0 * kPi);
    case FiberKind::torus2:
      return FiberGrid::torus2(N, N, 2.0 * kPi, 2.0 * kPi);
    default:
      return FiberGrid::sphere2_axisym(N);
  }
}

Field fixed_graph(const FiberGrid& g, double r0, double amp) {
  Field rho(g.nodes());
  if (g.kind == FiberKind::torus1) {
    for (int i = 0; i < g.n1; ++i) {
      double x = 2.0 * kPi * g.coord1[i] / g.L1;
      rho[i] = r0 + amp * std::sin(x) + 0.5 * amp * std::sin(2.0 * x + 0.4);
    }
  } else if (g.kind == FiberKind::torus2) {
    for (int i = 0; i < g.n1; ++i)
      for (int j = 0; j < g.n2; ++j) {
        double x = 2.0 * kPi * g.coord1[i] / g.L1;
        double y = 2.0 * kPi * g.coord2[j] / g.L2;
        rho[g.idx(i, j)] =
            r0 + amp * std::sin(x + 0.3) * std::cos(y) + 0.5 * amp * std::sin(y + 1.1);
      }
  } else {
    for (int j = 0; j < g.n1; ++j) {
      double t = g.coord1[j];
      rho[j] = r0 + amp * std::cos(t) + 0.5 * amp * std::cos(2.0 * t);
    }
  }
  return rho;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("coordinate slices reproduce closed forms") {
    struct Setup {
      FiberKind kind;
      WarpingFactor w;
      double r0;
    };
    Setup setups[] = {
        {FiberKind::torus1, WarpingFactor::product(0.0, 2.0, 1.3), 0.8},
        {FiberKind::torus2, WarpingFactor::gaussian(-1.0, 1.0, 1.0), -0.3},
        {FiberKind::sphere2_axisym, WarpingFactor::de_sitter(-1.5, 1.5, 0.8), 0.2},
    };
    for (const auto& su : setups) {
      auto g = grid_of(su.kind, su.kind == FiberKind::torus2 ? 20 : 48);
      Field rho(g.nodes(), su.r0);
      auto s = build_graph_state(g, su.w, rho);
      auto wv = eval(su.w, su.r0);
      double Hexact = g.n * wv.thp / wv.th;
      for (int k = 0; k < g.nodes(); ++k) {
        CHECK(s.v2[k] == 1.0);
        CHECK(s.v[k] == 1.0);
        CHECK(s.u[k] == doctest::Approx(wv.th).epsilon(1e-15));
        CHECK(s.dtheta_div[k] == 0.0);
        CHECK(s.H[k] == doctest::Approx(Hexact).epsilon(1e-12));
        CHECK(std::abs(s.dtheta_trace[k]) <= 1e-12 * (1.0 + std::abs(wv.thp)));
        CHECK(s.theta_f[k] == doctest::Approx(wv.theta).epsilon(1e-13));
        CHECK(s.ringA2[k] <= 1e-26);
      }
    }
  }

  TEST_CASE("optimized kernels match the serial reference") {
    std::mt19937_64 rng(2026);
    struct Setup {
      FiberKind kind;
      int N;
      WarpingFactor w;
      double r0, amp;
    };
    Setup setups[] = {
        {FiberKind::torus1, 96, WarpingFactor::gaussian(-1.0, 1.0, 1.0), -0.1, 0.08},
        {FiberKind::torus1, 96, WarpingFactor::de_sitter(-1.5, 1.5, 0.8), 0.2, 0.12},
        {FiberKind::torus2, 28, WarpingFactor::gaussian(-1.0, 1.0, 1.0), -0.1, 0.07},
        {FiberKind::torus2, 28, WarpingFactor::product(-1.0, 1.0, 1.2), 0.1, 0.1},
        {FiberKind::sphere2_axisym, 64, WarpingFactor::gaussian(-1.0, 1.0, 1.0), -0.2, 0.06},
        {FiberKind::sphere2_axisym, 64, WarpingFactor::de_sitter(-1.5, 1.5, 0.8), 0.2, 0.08},
    };
    for (const auto& su : setups) {
      auto g = grid_of(su.kind, su.N);
      for (int rep = 0; rep < 3; ++rep) {
        Field rho = testutil::random_graph(g, su.r0, su.amp, rng);
        auto s = build_graph_state(g, su.w, rho);
        auto r = reference_graph_state(g, su.w, rho);
        compare_states(g, s, r, 1e-11);
      }
    }
  }

  TEST_CASE("trace and divergence Laplacians agree under refinement") {
    struct Setup {
      FiberKind kind;
      int N0;
      WarpingFactor w;
      double r0, amp;
    };
    Setup setups[] = {
        {FiberKind::torus1, 64, WarpingFactor::gaussian(-1.0, 1.0, 1.0), -0.1, 0.1},
        {FiberKind::torus2, 24, WarpingFactor::de_sitter(-1.5, 1.5, 0.8), 0.2, 0.1},
        {FiberKind::sphere2_axisym, 48, WarpingFactor::gaussian(-1.0, 1.0, 1.0), -0.2, 0.07},
    };
    for (const auto& su : setups) {
      double err[2];
      for (int t = 0; t < 2; ++t) {
        auto g = grid_of(su.kind, su.N0 << t);
        auto s = build_graph_state(g, su.w, fixed_graph(g, su.r0, su.amp));
        double e = 0.0;
        for (int k = 0; k < g.nodes(); ++k)
          e = std::max(e, std::abs(s.dtheta_div[k] - s.dtheta_trace[k]));
        err[t] = e;
      }
      INFO("kind ", (int)su.kind, " errors ", err[0], " ", err[1]);
      CHECK(err[0] / err[1] > 3.0);
      CHECK(err[0] / err[1] < 5.2);
    }
  }

  TEST_CASE("integral of the divergence-form Laplacian telescopes") {
    std::mt19937_64 rng(7);
    WarpingFactor w = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
    for (FiberKind kind :
         {FiberKind::torus1, FiberKind::torus2, FiberKind::sphere2_axisym}) {
      auto g = grid_of(kind, kind == FiberKind::torus2 ? 32 : 64);
      for (int rep = 0; rep < 5; ++rep) {
        Field rho = testutil::random_graph(g, -0.1, 0.08, rng);
        auto s = build_graph_state(g, w, rho, BuildLevel::flow);
        double total = integral_dtheta(g, s);
        double A = area(g, s);
        INFO("kind ", (int)kind, " integral ", total, " area ", A);
        CHECK(std::abs(total) <= 1e-13 * A);
      }
    }
  }

  TEST_CASE("principal curvatures diagonalize the shape operator") {
    std::mt19937_64 rng(11);
    auto w = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
    for (FiberKind kind : {FiberKind::torus2, FiberKind::sphere2_axisym}) {
      auto g = grid_of(kind, kind == FiberKind::torus2 ? 20 : 48);
      Field rho = testutil::random_graph(g, -0.1, 0.07, rng);
      auto s = build_graph_state(g, w, rho);
      for (int k = 0; k < g.nodes(); k += 7) {
        auto pc = principal_curvatures(g, s, k);
        CHECK(pc[0] <= pc[1]);
        CHECK(pc[0] + pc[1] == doctest::Approx(s.H[k]).epsilon(1e-10));
        CHECK(pc[0] * pc[0] + pc[1] * pc[1] ==
              doctest::Approx(s.normA2[k]).epsilon(1e-9));
      }
    }
    auto g1 = grid_of(FiberKind::torus1, 64);
    Field rho1 = testutil::random_graph(g1, -0.1, 0.08, rng);
    auto s1 = build_graph_state(g1, w, rho1);
    auto pc = principal_curvatures(g1, s1, 5);
    CHECK(pc[0] == s1.H[5]);
  }

  TEST_CASE("spacelike guard throws with the offending node") {
    auto g = FiberGrid::torus1(64, 2.0 * kPi);
    auto w = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
    Field rho(g.nodes());
    // slope 1.2 exceeds vartheta near the zero crossings, so v^2 goes negative
    for (int i = 0; i < g.n1; ++i) rho[i] = 0.6 * std::sin(2.0 * g.coord1[i]);
    bool thrown = false;
    try {
      build_graph_state(g, w, rho);
    } catch (const SpacelikeViolation& e) {
      thrown = true;
      CHECK(e.v2 <= 1e-4);
      CHECK(e.node >= 0);
      CHECK(e.node < g.nodes());
    }
    CHECK(thrown);
  }

  TEST_CASE("slab guard throws when the graph leaves the domain") {
    auto g = FiberGrid::torus1(32, 2.0 * kPi);
    auto w = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
    CHECK_THROWS_AS(build_graph_state(g, w, Field(g.nodes(), 1.2)), std::domain_error);
    CHECK_THROWS_AS(build_graph_state(g, w, Field(g.nodes(), -1.0001)), std::domain_error);
    CHECK_THROWS_AS(build_graph_state(g, w, Field(5, 0.0)), std::domain_error);
  }

  TEST_CASE("ambient curvature terms vanish on slices and keep the expected sign") {
    auto g = grid_of(FiberKind::torus2, 20);
    auto wg = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
    auto s = build_graph_state(g, wg, Field(g.nodes(), 0.1));
    Field tn, ww;
    ambient_ricci_terms(g, wg, s, tn, ww);
    for (int k = 0; k < g.nodes(); ++k) {
      CHECK(tn[k] == 0.0);
      CHECK(ww[k] == 0.0);
    }
    std::mt19937_64 rng(3);
    Field rho = testutil::random_graph(g, -0.1, 0.1, rng);
    s = build_graph_state(g, wg, rho);
    ambient_ricci_terms(g, wg, s, tn, ww);
    double pos = 0.0;
    for (int k = 0; k < g.nodes(); ++k) {
      CHECK(tn[k] >= 0.0);  // gaussian warping satisfies the convergence condition
      pos = std::max(pos, tn[k]);
      CHECK(ww[k] * s.u[k] == doctest::Approx(tn[k]).epsilon(1e-12));
    }
    CHECK(pos > 0.0);
    auto wd = WarpingFactor::de_sitter(-1.5, 1.5, 0.8);
    s = build_graph_state(g, wd, rho);
    ambient_ricci_terms(g, wd, s, tn, ww);
    double neg = 0.0;
    for (int k = 0; k < g.nodes(); ++k) {
      CHECK(tn[k] <= 0.0);  // torus fiber breaks the condition for cosh warpings
      neg = std::min(neg, tn[k]);
    }
    CHECK(neg < 0.0);
  }

  TEST_CASE("sigma2 identity residual shrinks at second order") {
    {
      double err[2];
      for (int t = 0; t < 2; ++t) {
        auto g = grid_of(FiberKind::torus2, 24 << t);
        auto w = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
        auto s = build_graph_state(g, w, fixed_graph(g, -0.1, 0.09));
        err[t] = sigma2_integral_residual(g, w, s);
      }
      INFO("torus2 residuals ", err[0], " ", err[1]);
      CHECK(err[0] / err[1] > 2.8);
      CHECK(err[0] / err[1] < 6.0);
    }
    {
      double err[2];
      for (int t = 0; t < 2; ++t) {
        auto g = grid_of(FiberKind::sphere2_axisym, 48 << t);
        auto w = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
        auto s = build_graph_state(g, w, fixed_graph(g, -0.2, 0.07));
        err[t] = sigma2_integral_residual(g, w, s);
      }
      INFO("sphere residuals ", err[0], " ", err[1]);
      CHECK(err[0] / err[1] > 2.8);
      CHECK(err[0] / err[1] < 6.0);
    }
    auto g1 = grid_of(FiberKind::torus1, 64);
    auto w = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
    auto s1 = build_graph_state(g1, w, fixed_graph(g1, -0.1, 0.1));
    CHECK(sigma2_integral_residual(g1, w, s1) == 0.0);
  }

  TEST_CASE("surface Laplacian of scalars") {
    auto w = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
    for (FiberKind kind :
         {FiberKind::torus1, FiberKind::torus2, FiberKind::sphere2_axisym}) {
      auto g = grid_of(kind, kind == FiberKind::torus2 ? 24 : 48);
      auto s = build_graph_state(g, w, fixed_graph(g, -0.1, 0.08));
      Field out;
      laplace_beltrami(g, s, Field(g.nodes(), 3.7), out);
      for (int k = 0; k < g.nodes(); ++k) CHECK(out[k] == 0.0);
    }
    // applied to Theta(rho) it reproduces the divergence-form Laplacian of
    // Theta up to discretization error, at second order
    for (FiberKind kind : {FiberKind::torus1, FiberKind::sphere2_axisym}) {
      double err[2];
      for (int t = 0; t < 2; ++t) {
        auto g = grid_of(kind, 48 << t);
        auto s = build_graph_state(g, w, fixed_graph(g, -0.1, 0.08));
        Field out;
        laplace_beltrami(g, s, s.theta_f, out);
        double e = 0.0;
        for (int k = 0; k < g.nodes(); ++k)
          e = std::max(e, std::abs(out[k] - s.dtheta_div[k]));
        err[t] = e;
      }
      INFO("kind ", (int)kind, " errors ", err[0], " ", err[1]);
      CHECK(err[0] / err[1] > 2.8);
      CHECK(err[0] / err[1] < 5.5);
    }
  }
}
