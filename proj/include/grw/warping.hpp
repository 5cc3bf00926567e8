#pragma once

#include <functional>

#include "grw/types.hpp"

namespace grw {

enum class WarpingFamily { product, de_sitter, gaussian, custom };

// Warping factor vartheta of the ambient metric -dr^2 + vartheta^2(r) ghat on
// (a,b) x fiber.  Theta denotes the antiderivative of vartheta normalized so
// that Theta(a) = 0.
struct WarpingFactor {
  WarpingFamily family = WarpingFamily::product;
  double a = 0.0;
  double b = 1.0;
  double scale = 1.0;  // multiplies vartheta for the built-in families

  // custom family only: value and first two derivatives, all analytic
  std::function<double(double)> f, fp, fpp;

  static WarpingFactor product(double a, double b, double scale = 1.0);
  static WarpingFactor de_sitter(double a, double b, double scale = 1.0);
  static WarpingFactor gaussian(double a, double b, double scale = 1.0);
  static WarpingFactor custom(double a, double b, std::function<double(double)> f,
                              std::function<double(double)> fp,
                              std::function<double(double)> fpp);
};

struct WarpingValues {
  double th;     // vartheta(r)
  double thp;    // vartheta'(r)
  double thpp;   // vartheta''(r)
  double theta;  // Theta(r) = int_a^r vartheta
};

// Value, derivatives and Theta at r.  Throws std::domain_error outside [a,b)
// and InvalidWarping if vartheta <= 0 there.
WarpingValues eval(const WarpingFactor& w, double r);

// vartheta(r) alone; same domain checks.  Cheap path for hot loops.
double vartheta(const WarpingFactor& w, double r);
double vartheta_prime(const WarpingFactor& w, double r);
double vartheta_second(const WarpingFactor& w, double r);
double theta(const WarpingFactor& w, double r);

// int_a^r vartheta^n ds, the radial density of enclosed volume (n = fiber dim).
// Closed form for the built-in families, adaptive quadrature for custom ones.
double warped_volume_integral(const WarpingFactor& w, double r, int n);

// mu(r) = lambda_hat - (n-1)(vartheta vartheta'' - vartheta'^2).
// Equals vartheta^2 Ric(K,K) for the null direction K = d_r + vartheta^{-1} e
// when the fiber has constant Ricci curvature lambda_hat; the null convergence
// condition holds on the slab iff mu >= 0 for all r.
double ncc_margin(const WarpingFactor& w, double r, double lambda_hat, int n);

}  // namespace grw
