#include <cmath>
#include <random>

#include "doctest.h"
#include "grw/warping.hpp"

using namespace grw;

namespace {
constexpr double kSinh1 = 1.1752011936438014;         // sinh(1)
constexpr double kCosh2Int = 1.4067151019617548;      // int_{-1}^{0} cosh^2
constexpr double kGaussTheta = 0.8556243918921487;    // sqrt(pi/2) erf(1/sqrt 2)
}  // namespace

TEST_SUITE("warping") {
  TEST_CASE("product family closed forms") {
    auto w = WarpingFactor::product(0.0, 2.0, 1.3);
    auto v = eval(w, 0.7);
    CHECK(v.th == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(v.thp == 0.0);
    CHECK(v.thpp == 0.0);
    CHECK(v.theta == doctest::Approx(1.3 * 0.7).epsilon(1e-15));
    CHECK(warped_volume_integral(w, 0.7, 1) == doctest::Approx(1.3 * 0.7).epsilon(1e-15));
    CHECK(warped_volume_integral(w, 0.7, 2) ==
          doctest::Approx(1.3 * 1.3 * 0.7).epsilon(1e-15));
  }

  TEST_CASE("de sitter family closed forms") {
    auto w = WarpingFactor::de_sitter(-1.0, 1.5, 1.0);
    auto v = eval(w, 0.0);
    CHECK(v.th == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.thp == 0.0);
    CHECK(v.thpp == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.theta == doctest::Approx(kSinh1).epsilon(1e-15));
    CHECK(warped_volume_integral(w, 0.0, 2) == doctest::Approx(kCosh2Int).epsilon(1e-14));

    auto ws = WarpingFactor::de_sitter(-1.0, 1.5, 0.8);
    CHECK(vartheta(ws, 0.3) == doctest::Approx(0.8 * std::cosh(0.3)).epsilon(1e-15));
    CHECK(warped_volume_integral(ws, 0.0, 2) ==
          doctest::Approx(0.64 * kCosh2Int).epsilon(1e-14));
  }

  TEST_CASE("gaussian family closed forms") {
    auto w = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
    CHECK(theta(w, 0.0) == doctest::Approx(kGaussTheta).epsilon(1e-14));
    auto v = eval(w, 0.4);
    double th = std::exp(-0.5 * 0.16);
    CHECK(v.th == doctest::Approx(th).epsilon(1e-15));
    CHECK(v.thp == doctest::Approx(-0.4 * th).epsilon(1e-15));
    CHECK(v.thpp == doctest::Approx((0.16 - 1.0) * th).epsilon(1e-15));
    double wvi = std::sqrt(3.14159265358979323846) / 2.0 *
                 (std::erf(0.4) - std::erf(-1.0));
    CHECK(warped_volume_integral(w, 0.4, 2) == doctest::Approx(wvi).epsilon(1e-14));
  }

  TEST_CASE("theta and volume integral differentiate back to vartheta") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> pick(-0.8, 0.8);
    WarpingFactor ws[3] = {WarpingFactor::product(-1.0, 1.0, 1.2),
                           WarpingFactor::de_sitter(-1.0, 1.0, 0.9),
                           WarpingFactor::gaussian(-1.0, 1.0, 1.1)};
    double h = 1e-5;
    for (const auto& w : ws) {
      for (int it = 0; it < 10; ++it) {
        double r = pick(rng);
        double d = (theta(w, r + h) - theta(w, r - h)) / (2.0 * h);
        CHECK(d == doctest::Approx(vartheta(w, r)).epsilon(1e-8));
        double d2 = (warped_volume_integral(w, r + h, 2) -
                     warped_volume_integral(w, r - h, 2)) /
                    (2.0 * h);
        double th = vartheta(w, r);
        CHECK(d2 == doctest::Approx(th * th).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("custom family matches the closed-form twin") {
    auto wc = WarpingFactor::custom(
        -1.0, 1.5, [](double r) { return std::cosh(r); },
        [](double r) { return std::sinh(r); }, [](double r) { return std::cosh(r); });
    auto wd = WarpingFactor::de_sitter(-1.0, 1.5, 1.0);
    CHECK(theta(wc, 0.6) == doctest::Approx(theta(wd, 0.6)).epsilon(1e-9));
    CHECK(warped_volume_integral(wc, 0.6, 2) ==
          doctest::Approx(warped_volume_integral(wd, 0.6, 2)).epsilon(1e-9));
    CHECK(vartheta_second(wc, 0.6) == doctest::Approx(std::cosh(0.6)).epsilon(1e-15));
  }

  TEST_CASE("custom family rejects bad input") {
    CHECK_THROWS_AS(WarpingFactor::custom(0.0, 1.0, nullptr, nullptr, nullptr),
                    InvalidWarping);
    CHECK_THROWS_AS(WarpingFactor::custom(
                        0.0, 4.0, [](double r) { return std::sin(r); },
                        [](double r) { return std::cos(r); },
                        [](double r) { return -std::sin(r); }),
                    InvalidWarping);
  }

  TEST_CASE("domain checks") {
    auto w = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
    CHECK_THROWS_AS(eval(w, -1.1), std::domain_error);
    CHECK_THROWS_AS(eval(w, 1.0), std::domain_error);
    CHECK_THROWS_AS(eval(w, 2.0), std::domain_error);
    CHECK_NOTHROW(eval(w, -1.0));
    CHECK_NOTHROW(eval(w, 1.0 - 1e-9));
    CHECK_THROWS_AS(theta(w, 1.2), std::domain_error);
    CHECK_THROWS_AS(warped_volume_integral(w, -2.0, 2), std::domain_error);
  }

  TEST_CASE("null convergence margin per family") {
    auto wg = WarpingFactor::gaussian(-1.0, 1.0, 1.0);
    for (double r : {-0.6, 0.0, 0.5}) {
      double th = vartheta(wg, r);
      CHECK(ncc_margin(wg, r, 0.0, 2) == doctest::Approx(th * th).epsilon(1e-13));
    }
    auto wd = WarpingFactor::de_sitter(-1.0, 1.0, 1.0);
    CHECK(std::abs(ncc_margin(wd, 0.3, 1.0, 2)) < 1e-14);  // Einstein case
    auto wd8 = WarpingFactor::de_sitter(-1.0, 1.0, 0.8);
    CHECK(ncc_margin(wd8, -0.4, 1.0, 2) == doctest::Approx(0.36).epsilon(1e-13));
    CHECK(ncc_margin(wd8, 0.2, 0.0, 2) == doctest::Approx(-0.64).epsilon(1e-13));
    auto wp = WarpingFactor::product(0.0, 1.0, 2.0);
    CHECK(ncc_margin(wp, 0.5, 1.0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  }
}
