#include "grw/warping.hpp"

#include <cmath>

namespace grw {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_domain(const WarpingFactor& w, double r) {
  // allow round-off slack at the left edge; slices at r = a are legal
  double slack = 1e-12 * (w.b - w.a);
  if (r < w.a - slack || r >= w.b)
    throw std::domain_error("warping factor evaluated at r = " + std::to_string(r) +
                            " outside [" + std::to_string(w.a) + ", " +
                            std::to_string(w.b) + ")");
}

// adaptive Simpson on [lo, hi], relative tolerance 1e-10 (custom factors only)
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double flo, double fmid, double fhi, double whole, double tol,
                        int depth) {
  double mid = 0.5 * (lo + hi);
  double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  double flm = f(lm), frm = f(rm);
  double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
  double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
  double sum = left + right;
  if (depth <= 0 || std::abs(sum - whole) <= 15.0 * tol) return sum + (sum - whole) / 15.0;
  return adaptive_simpson(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  if (lo == hi) return 0.0;
  double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
  double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  double tol = 1e-10 * std::max(1.0, std::abs(whole));
  return adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 48);
}

}  // namespace

WarpingFactor WarpingFactor::product(double a, double b, double scale) {
  WarpingFactor w;
  w.family = WarpingFamily::product;
  w.a = a;
  w.b = b;
  w.scale = scale;
  if (scale <= 0.0) throw InvalidWarping("product warping needs a positive scale");
  return w;
}

WarpingFactor WarpingFactor::de_sitter(double a, double b, double scale) {
  WarpingFactor w = product(a, b, scale);
  w.family = WarpingFamily::de_sitter;
  return w;
}

WarpingFactor WarpingFactor::gaussian(double a, double b, double scale) {
  WarpingFactor w = product(a, b, scale);
  w.family = WarpingFamily::gaussian;
  return w;
}

WarpingFactor WarpingFactor::custom(double a, double b, std::function<double(double)> f,
                                    std::function<double(double)> fp,
                                    std::function<double(double)> fpp) {
  WarpingFactor w;
  w.family = WarpingFamily::custom;
  w.a = a;
  w.b = b;
  w.f = std::move(f);
  w.fp = std::move(fp);
  w.fpp = std::move(fpp);
  if (!w.f || !w.fp || !w.fpp)
    throw InvalidWarping("custom warping needs vartheta and two analytic derivatives");
  // positivity probe: vartheta must stay positive on the whole slab
  for (int i = 0; i <= 1024; ++i) {
    double r = a + (b - a) * (i / 1024.0) * (1.0 - 1e-9);
    if (!(w.f(r) > 0.0))
      throw InvalidWarping("custom warping factor is not positive at r = " + std::to_string(r));
  }
  return w;
}

double vartheta(const WarpingFactor& w, double r) {
  check_domain(w, r);
  switch (w.family) {
    case WarpingFamily::product: return w.scale;
    case WarpingFamily::de_sitter: return w.scale * std::cosh(r);
    case WarpingFamily::gaussian: return w.scale * std::exp(-0.5 * r * r);
    case WarpingFamily::custom: {
      double t = w.f(r);
      if (!(t > 0.0)) throw InvalidWarping("warping factor not positive at r = " + std::to_string(r));
      return t;
    }
  }
  return 0.0;  // unreachable
}

double vartheta_prime(const WarpingFactor& w, double r) {
  check_domain(w, r);
  switch (w.family) {
    case WarpingFamily::product: return 0.0;
    case WarpingFamily::de_sitter: return w.scale * std::sinh(r);
    case WarpingFamily::gaussian: return -r * w.scale * std::exp(-0.5 * r * r);
    case WarpingFamily::custom: return w.fp(r);
  }
  return 0.0;
}

double vartheta_second(const WarpingFactor& w, double r) {
  check_domain(w, r);
  switch (w.family) {
    case WarpingFamily::product: return 0.0;
    case WarpingFamily::de_sitter: return w.scale * std::cosh(r);
    case WarpingFamily::gaussian: return (r * r - 1.0) * w.scale * std::exp(-0.5 * r * r);
    case WarpingFamily::custom: return w.fpp(r);
  }
  return 0.0;
}

double theta(const WarpingFactor& w, double r) {
  check_domain(w, r);
  switch (w.family) {
    case WarpingFamily::product: return w.scale * (r - w.a);
    case WarpingFamily::de_sitter: return w.scale * (std::sinh(r) - std::sinh(w.a));
    case WarpingFamily::gaussian: {
      // int exp(-s^2/2) = sqrt(pi/2) erf(s/sqrt 2)
      double c = std::sqrt(kPi / 2.0);
      return w.scale * c * (std::erf(r / std::sqrt(2.0)) - std::erf(w.a / std::sqrt(2.0)));
    }
    case WarpingFamily::custom: return integrate(w.f, w.a, r);
  }
  return 0.0;
}

WarpingValues eval(const WarpingFactor& w, double r) {
  WarpingValues out;
  out.th = vartheta(w, r);
  out.thp = vartheta_prime(w, r);
  out.thpp = vartheta_second(w, r);
  out.theta = theta(w, r);
  return out;
}

double warped_volume_integral(const WarpingFactor& w, double r, int n) {
  check_domain(w, r);
  if (n < 1) throw std::domain_error("fiber dimension must be >= 1");
  if (n == 1) return theta(w, r);
  double s2 = w.scale * w.scale;
  switch (w.family) {
    case WarpingFamily::product: return s2 * (r - w.a);
    case WarpingFamily::de_sitter: {
      auto F = [](double s) { return 0.5 * (s + std::sinh(s) * std::cosh(s)); };
      return s2 * (F(r) - F(w.a));
    }
    case WarpingFamily::gaussian: {
      // int exp(-s^2) = (sqrt pi / 2) erf(s)
      double c = std::sqrt(kPi) / 2.0;
      return s2 * c * (std::erf(r) - std::erf(w.a));
    }
    case WarpingFamily::custom: {
      auto f = w.f;
      return integrate([f, n](double s) { return std::pow(f(s), n); }, w.a, r);
    }
  }
  return 0.0;
}

double ncc_margin(const WarpingFactor& w, double r, double lambda_hat, int n) {
  if (n < 1) throw std::domain_error("fiber dimension must be >= 1");
  double th = vartheta(w, r);
  double thp = vartheta_prime(w, r);
  double thpp = vartheta_second(w, r);
  return lambda_hat - (n - 1) * (th * thpp - thp * thp);
}

}  // namespace grw
