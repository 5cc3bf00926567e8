#include "grw/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace grw {

namespace {

// hot-loop vartheta values; domain is validated separately so the flow
// kernels stay exception-free inside parallel regions
inline void vartheta_values(const WarpingFactor& w, double r, double& th, double& thp,
                            double& thpp) {
  switch (w.family) {
    case WarpingFamily::product:
      th = w.scale;
      thp = 0.0;
      thpp = 0.0;
      break;
    case WarpingFamily::de_sitter: {
      double c = std::cosh(r), s = std::sinh(r);
      th = w.scale * c;
      thp = w.scale * s;
      thpp = w.scale * c;
      break;
    }
    case WarpingFamily::gaussian: {
      double e = w.scale * std::exp(-0.5 * r * r);
      th = e;
      thp = -r * e;
      thpp = (r * r - 1.0) * e;
      break;
    }
    case WarpingFamily::custom:
      th = w.f(r);
      thp = w.fp(r);
      thpp = w.fpp(r);
      break;
  }
}

inline double clamp_r(const WarpingFactor& w, double r) {
  double lo = w.a;
  double hi = w.b - 1e-15 * (w.b - w.a);
  return r < lo ? lo : (r > hi ? hi : r);
}

void resize_metric(GraphState& s, int total, bool torus2) {
  s.d1rho.resize(total);
  if (torus2) s.d2rho.resize(total);
  s.th.resize(total);
  s.thp.resize(total);
  s.thpp.resize(total);
  s.v2.resize(total);
  s.v.resize(total);
  s.u.resize(total);
  s.g11.resize(total);
  s.g22.resize(total);
  if (torus2) s.g12.resize(total);
  s.inv11.resize(total);
  s.inv22.resize(total);
  if (torus2) s.inv12.resize(total);
  s.detg.resize(total);
  s.sqrtg.resize(total);
  s.c11.resize(total);
  if (torus2) {
    s.c12.resize(total);
    s.c22.resize(total);
  }
  s.dtheta_div.resize(total);
}

// post-pass validation: domain of rho, spacelike guard, determinant identity.
// Runs serially so the thrown node is deterministic.
void validate_state(const FiberGrid& grid, const WarpingFactor& w, GraphState& s,
                    double eps_v) {
  int total = grid.nodes();
  double slack = 1e-12 * (w.b - w.a);
  int bad_domain = -1;
  int argmin_v2 = 0;
  double worst_det = 0.0;
  double min_v2 = 2.0, max_u = 0.0;
  double min_rho = s.rho[0], max_rho = s.rho[0];
  for (int k = 0; k < total; ++k) {
    double r = s.rho[k];
    if ((r < w.a - slack || r >= w.b) && bad_domain < 0) bad_domain = k;
    double v2 = s.v2[k];
    if (v2 < min_v2) {
      min_v2 = v2;
      argmin_v2 = k;
    }
    if (s.u[k] > max_u) max_u = s.u[k];
    if (r < min_rho) min_rho = r;
    if (r > max_rho) max_rho = r;
    // det g = vartheta^{2n} det ghat v^2, evaluated from the components
    double th2 = s.th[k] * s.th[k];
    double comp, scale;
    if (grid.kind == FiberKind::torus1) {
      comp = s.g11[k];
      scale = th2;
    } else if (grid.kind == FiberKind::torus2) {
      comp = s.g11[k] * s.g22[k] - s.g12[k] * s.g12[k];
      scale = th2 * th2;
    } else {
      comp = s.g11[k] * s.g22[k];
      scale = th2 * th2 * grid.ghat22[k];
    }
    double d = std::abs(comp - s.detg[k]);
    if (d > worst_det * scale) worst_det = d / scale;
  }
  s.min_v2 = min_v2;
  s.max_u = max_u;
  s.min_rho = min_rho;
  s.max_rho = max_rho;
  if (bad_domain >= 0)
    throw std::domain_error("graph leaves the slab: rho = " + std::to_string(s.rho[bad_domain]) +
                            " at node " + std::to_string(bad_domain));
  if (min_v2 <= eps_v) throw SpacelikeViolation(argmin_v2, min_v2, eps_v);
  if (worst_det > 2e-12)
    throw std::logic_error("metric determinant self-check failed: relative mismatch " +
                           std::to_string(worst_det));
}

}  // namespace

void induced_metric(const FiberGrid& grid, const WarpingFactor& w, const Field& rho,
                    GraphState& s, double eps_v) {
  int total = grid.nodes();
  if ((int)rho.size() != total) throw std::domain_error("rho size does not match grid");
  s.rho = rho;
  s.full = false;
  bool torus2 = grid.kind == FiberKind::torus2;
  resize_metric(s, total, torus2);

  partial(grid, s.rho, 0, Parity::even, s.d1rho);
  if (torus2) partial(grid, s.rho, 1, Parity::even, s.d2rho);

  if (grid.kind == FiberKind::torus1) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < total; ++k) {
      double th = 0.0, thp = 0.0, thpp = 0.0;
      vartheta_values(w, clamp_r(w, rho[k]), th, thp, thpp);
      double p = s.d1rho[k];
      double v2 = 1.0 - (p * p) / (th * th);
      double v = std::sqrt(std::max(v2, 0.0));
      s.th[k] = th;
      s.thp[k] = thp;
      s.thpp[k] = thpp;
      s.v2[k] = v2;
      s.v[k] = v;
      s.u[k] = th / v;
      s.g11[k] = th * th - p * p;
      double det = th * th * v2;
      s.detg[k] = det;
      s.sqrtg[k] = th * v;
      double inv = 1.0 / det;
      s.inv11[k] = inv;
      s.c11[k] = s.sqrtg[k] * inv * th;
    }
  } else if (torus2) {
    int N1 = grid.n1, N2 = grid.n2;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N1; ++i) {
      for (int j = 0; j < N2; ++j) {
        int k = i * N2 + j;
        double th = 0.0, thp = 0.0, thpp = 0.0;
        vartheta_values(w, clamp_r(w, rho[k]), th, thp, thpp);
        double p = s.d1rho[k], q = s.d2rho[k];
        double th2 = th * th;
        double v2 = 1.0 - (p * p + q * q) / th2;
        double v = std::sqrt(std::max(v2, 0.0));
        s.th[k] = th;
        s.thp[k] = thp;
        s.thpp[k] = thpp;
        s.v2[k] = v2;
        s.v[k] = v;
        s.u[k] = th / v;
        s.g11[k] = th2 - p * p;
        s.g12[k] = -p * q;
        s.g22[k] = th2 - q * q;
        double det = th2 * th2 * v2;
        s.detg[k] = det;
        double sg = th2 * v;
        s.sqrtg[k] = sg;
        double inv = 1.0 / det;
        double i11 = s.g22[k] * inv, i12 = -s.g12[k] * inv, i22 = s.g11[k] * inv;
        s.inv11[k] = i11;
        s.inv12[k] = i12;
        s.inv22[k] = i22;
        s.c11[k] = sg * i11 * th;
        s.c12[k] = sg * i12 * th;
        s.c22[k] = sg * i22 * th;
      }
    }
  } else {
    // axisymmetric sphere: chart (theta, phi), fields depend on theta only.
    // c11 holds the reduced flux coefficient vartheta/v; the exact sin factor
    // is applied at faces so the pole fluxes vanish identically.
    int N = grid.n1;
#pragma omp parallel for schedule(static)
    for (int k = 0; k < N; ++k) {
      double th = 0.0, thp = 0.0, thpp = 0.0;
      vartheta_values(w, clamp_r(w, rho[k]), th, thp, thpp);
      double p = s.d1rho[k];
      double th2 = th * th;
      double sin2 = grid.ghat22[k];
      double v2 = 1.0 - (p * p) / th2;
      double v = std::sqrt(std::max(v2, 0.0));
      s.th[k] = th;
      s.thp[k] = thp;
      s.thpp[k] = thpp;
      s.v2[k] = v2;
      s.v[k] = v;
      s.u[k] = th / v;
      s.g11[k] = th2 - p * p;
      s.g22[k] = th2 * sin2;
      double det = th2 * th2 * v2 * sin2;
      s.detg[k] = det;
      s.sqrtg[k] = th2 * v * std::sqrt(sin2);
      s.inv11[k] = 1.0 / (th2 * v2);
      s.inv22[k] = 1.0 / s.g22[k];
      s.c11[k] = th / v;
    }
  }

  validate_state(grid, w, s, eps_v);
  laplace_theta_div(grid, s);
}

void laplace_theta_div(const FiberGrid& grid, GraphState& s) {
  int total = grid.nodes();
  s.dtheta_div.resize(total);
  const double* rho = s.rho.data();

  if (grid.kind == FiberKind::torus1) {
    int N = grid.n1;
    double ih = 1.0 / grid.h1;
    const double* c = s.c11.data();
    auto face = [&](int p, int q) { return 0.5 * (c[p] + c[q]) * (rho[q] - rho[p]) * ih; };
#pragma omp parallel for schedule(static)
    for (int k = 0; k < N; ++k) {
      int kp = k + 1 == N ? 0 : k + 1;
      int km = k == 0 ? N - 1 : k - 1;
      s.dtheta_div[k] = (face(k, kp) - face(km, k)) * ih / s.sqrtg[k];
    }
    return;
  }

  if (grid.kind == FiberKind::torus2) {
    int N1 = grid.n1, N2 = grid.n2;
    double ih1 = 1.0 / grid.h1, ih2 = 1.0 / grid.h2;
    const double *c11 = s.c11.data(), *c12 = s.c12.data(), *c22 = s.c22.data();
    const double *d1 = s.d1rho.data(), *d2 = s.d2rho.data();
    // faces between p and its +e1 (resp. +e2) neighbor q; both adjacent nodes
    // evaluate the identical expression, so the discrete integral of the
    // divergence telescopes to zero exactly
    auto face1 = [&](int p, int q) {
      return 0.5 * (c11[p] + c11[q]) * (rho[q] - rho[p]) * ih1 +
             0.25 * (c12[p] + c12[q]) * (d2[p] + d2[q]);
    };
    auto face2 = [&](int p, int q) {
      return 0.5 * (c22[p] + c22[q]) * (rho[q] - rho[p]) * ih2 +
             0.25 * (c12[p] + c12[q]) * (d1[p] + d1[q]);
    };
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N1; ++i) {
      int ip = i + 1 == N1 ? 0 : i + 1;
      int im = i == 0 ? N1 - 1 : i - 1;
      for (int j = 0; j < N2; ++j) {
        int jp = j + 1 == N2 ? 0 : j + 1;
        int jm = j == 0 ? N2 - 1 : j - 1;
        int k = i * N2 + j;
        double div = (face1(k, ip * N2 + j) - face1(im * N2 + j, k)) * ih1 +
                     (face2(k, i * N2 + jp) - face2(i * N2 + jm, k)) * ih2;
        s.dtheta_div[k] = div / s.sqrtg[k];
      }
    }
    return;
  }

  // sphere: flux F = sin(theta_face) avg(vartheta/v) d_theta rho; the even
  // ghost makes the jump vanish at both poles, so no boundary terms survive
  int N = grid.n1;
  double ih = 1.0 / grid.h1;
  const double* c = s.c11.data();
  auto face = [&](int q) {  // face at theta = q h between nodes q-1 and q
    int p = q - 1;
    double rp = p >= 0 ? rho[p] : rho[0];
    double rq = q < N ? rho[q] : rho[N - 1];
    double cp = p >= 0 ? c[p] : c[0];
    double cq = q < N ? c[q] : c[N - 1];
    return std::sin(q * grid.h1) * 0.5 * (cp + cq) * (rq - rp) * ih;
  };
#pragma omp parallel for schedule(static)
  for (int k = 0; k < N; ++k) {
    s.dtheta_div[k] = (face(k + 1) - face(k)) * ih / s.sqrtg[k];
  }
}

void second_fundamental_form(const FiberGrid& grid, const WarpingFactor& w, GraphState& s) {
  (void)w;
  int total = grid.nodes();
  s.H.resize(total);
  s.normA2.resize(total);
  s.ringA2.resize(total);
  s.h11.resize(total);
  s.G111.resize(total);
  const double* rho = s.rho.data();

  if (grid.kind == FiberKind::torus1) {
    int N = grid.n1;
    Field dg11 = partial(grid, s.g11, 0, Parity::even);
    double ih2 = 1.0 / (grid.h1 * grid.h1);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < N; ++k) {
      int kp = k + 1 == N ? 0 : k + 1;
      int km = k == 0 ? N - 1 : k - 1;
      double G = 0.5 * s.inv11[k] * dg11[k];
      s.G111[k] = G;
      double dd = (rho[kp] - 2.0 * rho[k] + rho[km]) * ih2;
      double hes = dd - G * s.d1rho[k];
      double h = s.v[k] * (hes + s.th[k] * s.thp[k]);
      s.h11[k] = h;
      double H = s.inv11[k] * h;
      s.H[k] = H;
      s.normA2[k] = H * H;
      s.ringA2[k] = 0.0;
    }
    return;
  }

  if (grid.kind == FiberKind::torus2) {
    int N1 = grid.n1, N2 = grid.n2;
    s.h12.resize(total);
    s.h22.resize(total);
    s.G112.resize(total);
    s.G122.resize(total);
    s.G211.resize(total);
    s.G212.resize(total);
    s.G222.resize(total);
    Field dg11_1 = partial(grid, s.g11, 0), dg11_2 = partial(grid, s.g11, 1);
    Field dg12_1 = partial(grid, s.g12, 0), dg12_2 = partial(grid, s.g12, 1);
    Field dg22_1 = partial(grid, s.g22, 0), dg22_2 = partial(grid, s.g22, 1);
    double ih11 = 1.0 / (grid.h1 * grid.h1);
    double ih22 = 1.0 / (grid.h2 * grid.h2);
    double ih12 = 1.0 / (4.0 * grid.h1 * grid.h2);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < N1; ++i) {
      int ip = i + 1 == N1 ? 0 : i + 1;
      int im = i == 0 ? N1 - 1 : i - 1;
      for (int j = 0; j < N2; ++j) {
        int jp = j + 1 == N2 ? 0 : j + 1;
        int jm = j == 0 ? N2 - 1 : j - 1;
        int k = i * N2 + j;
        double i11 = s.inv11[k], i12 = s.inv12[k], i22 = s.inv22[k];
        double a1 = dg11_1[k], a2 = dg11_2[k];
        double b1 = dg12_1[k], b2 = dg12_2[k];
        double e1 = dg22_1[k], e2 = dg22_2[k];
        double G111 = 0.5 * (i11 * a1 + i12 * (2.0 * b1 - a2));
        double G112 = 0.5 * (i11 * a2 + i12 * e1);
        double G122 = 0.5 * (i11 * (2.0 * b2 - e1) + i12 * e2);
        double G211 = 0.5 * (i12 * a1 + i22 * (2.0 * b1 - a2));
        double G212 = 0.5 * (i12 * a2 + i22 * e1);
        double G222 = 0.5 * (i12 * (2.0 * b2 - e1) + i22 * e2);
        s.G111[k] = G111;
        s.G112[k] = G112;
        s.G122[k] = G122;
        s.G211[k] = G211;
        s.G212[k] = G212;
        s.G222[k] = G222;
        double dd11 = (rho[ip * N2 + j] - 2.0 * rho[k] + rho[im * N2 + j]) * ih11;
        double dd22 = (rho[i * N2 + jp] - 2.0 * rho[k] + rho[i * N2 + jm]) * ih22;
        double dd12 = (rho[ip * N2 + jp] - rho[ip * N2 + jm] - rho[im * N2 + jp] +
                       rho[im * N2 + jm]) *
                      ih12;
        double p = s.d1rho[k], q = s.d2rho[k];
        double hes11 = dd11 - G111 * p - G211 * q;
        double hes12 = dd12 - G112 * p - G212 * q;
        double hes22 = dd22 - G122 * p - G222 * q;
        double tt = s.th[k] * s.thp[k];
        double v = s.v[k];
        double h11 = v * (hes11 + tt), h12 = v * hes12, h22 = v * (hes22 + tt);
        s.h11[k] = h11;
        s.h12[k] = h12;
        s.h22[k] = h22;
        double M11 = i11 * h11 + i12 * h12;
        double M12 = i11 * h12 + i12 * h22;
        double M21 = i12 * h11 + i22 * h12;
        double M22 = i12 * h12 + i22 * h22;
        s.H[k] = M11 + M22;
        s.normA2[k] = M11 * M11 + M22 * M22 + 2.0 * M12 * M21;
        // trace-free part; equals (kappa1-kappa2)^2/2, nonnegative up to round-off
        s.ringA2[k] = 0.5 * (M11 - M22) * (M11 - M22) + 2.0 * M12 * M21;
      }
    }
    return;
  }

  // sphere
  int N = grid.n1;
  s.h22.resize(total);
  s.G122.resize(total);
  s.G212.resize(total);
  Field dg11 = partial(grid, s.g11, 0, Parity::even);
  Field dg22 = partial(grid, s.g22, 0, Parity::even);
  double ih2 = 1.0 / (grid.h1 * grid.h1);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < N; ++k) {
    double rp = k + 1 < N ? rho[k + 1] : rho[N - 1];
    double rm = k > 0 ? rho[k - 1] : rho[0];
    double G111 = 0.5 * s.inv11[k] * dg11[k];
    double G122 = -0.5 * s.inv11[k] * dg22[k];
    double G212 = 0.5 * s.inv22[k] * dg22[k];
    s.G111[k] = G111;
    s.G122[k] = G122;
    s.G212[k] = G212;
    double dd = (rp - 2.0 * rho[k] + rm) * ih2;
    double p = s.d1rho[k];
    double hesTT = dd - G111 * p;
    double hesPP = -G122 * p;
    double tt = s.th[k] * s.thp[k];
    double v = s.v[k];
    double h11 = v * (hesTT + tt);
    double h22 = v * (hesPP + tt * grid.ghat22[k]);
    s.h11[k] = h11;
    s.h22[k] = h22;
    double kT = s.inv11[k] * h11, kP = s.inv22[k] * h22;
    s.H[k] = kT + kP;
    s.normA2[k] = kT * kT + kP * kP;
    s.ringA2[k] = 0.5 * (kT - kP) * (kT - kP);
  }
}

void laplace_theta_trace(const FiberGrid& grid, const WarpingFactor& w, GraphState& s) {
  (void)w;
  int total = grid.nodes();
  s.dtheta_trace.resize(total);
  double n = grid.n;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < total; ++k) s.dtheta_trace[k] = s.u[k] * s.H[k] - n * s.thp[k];
}

void build_graph_state(const FiberGrid& grid, const WarpingFactor& w, const Field& rho,
                       GraphState& s, BuildLevel level, double eps_v) {
  induced_metric(grid, w, rho, s, eps_v);
  if (level == BuildLevel::flow) return;
  second_fundamental_form(grid, w, s);
  laplace_theta_trace(grid, w, s);
  int total = grid.nodes();
  s.theta_f.resize(total);
  for (int k = 0; k < total; ++k) s.theta_f[k] = theta(w, clamp_r(w, s.rho[k]));
  s.full = true;
}

GraphState build_graph_state(const FiberGrid& grid, const WarpingFactor& w, const Field& rho,
                             BuildLevel level, double eps_v) {
  GraphState s;
  build_graph_state(grid, w, rho, s, level, eps_v);
  return s;
}

void ambient_ricci_terms(const FiberGrid& grid, const WarpingFactor& w, const GraphState& s,
                         Field& ric_grad_theta_nu, Field& ric_ww) {
  (void)w;
  int total = grid.nodes();
  ric_grad_theta_nu.resize(total);
  ric_ww.resize(total);
  double nm1 = grid.n - 1;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < total; ++k) {
    double th = s.th[k];
    double mu = grid.lambda_hat - nm1 * (th * s.thpp[k] - s.thp[k] * s.thp[k]);
    double v = s.v[k];
    double one_m_v2 = 1.0 - s.v2[k];
    double tn = mu * one_m_v2 / (v * v * v * th);
    ric_grad_theta_nu[k] = tn;
    ric_ww[k] = tn * v / th;
  }
}

std::array<double, 2> principal_curvatures(const FiberGrid& grid, const GraphState& s,
                                           int node) {
  if (!s.full) throw std::logic_error("principal curvatures need a full graph state");
  if (grid.kind == FiberKind::torus1) return {s.H[node], s.H[node]};
  if (grid.kind == FiberKind::sphere2_axisym) {
    double kT = s.inv11[node] * s.h11[node];
    double kP = s.inv22[node] * s.h22[node];
    return kT <= kP ? std::array<double, 2>{kT, kP} : std::array<double, 2>{kP, kT};
  }
  double half = 0.5 * s.H[node];
  double d = std::sqrt(std::max(0.5 * s.ringA2[node], 0.0));
  return {half - d, half + d};
}

double sigma2_integral_residual(const FiberGrid& grid, const WarpingFactor& w,
                                const GraphState& s) {
  if (!s.full) throw std::logic_error("sigma2 identity needs a full graph state");
  if (grid.n == 1) return 0.0;  // sigma_2 and both sides vanish identically
  Field ric_tn, ric_ww;
  ambient_ricci_terms(grid, w, s, ric_tn, ric_ww);
  int total = grid.nodes();
  double nm1 = grid.n - 1;
  CompensatedSum lhs, rhs;
  for (int k = 0; k < total; ++k) {
    double dens = grid.weights[k] * s.th[k] * s.th[k] * s.v[k];  // n = 2 here
    double sigma2 = 0.5 * (s.H[k] * s.H[k] - s.normA2[k]);
    lhs.add(dens * (2.0 * sigma2 * s.u[k] - nm1 * s.thp[k] * s.H[k]));
    rhs.add(dens * ric_tn[k]);
  }
  return std::abs(lhs.value() - rhs.value());
}

void laplace_beltrami(const FiberGrid& grid, const GraphState& s, const Field& f, Field& out) {
  int total = grid.nodes();
  if ((int)f.size() != total) throw std::domain_error("field size does not match grid");
  out.resize(total);

  if (grid.kind == FiberKind::torus1) {
    int N = grid.n1;
    double ih = 1.0 / grid.h1;
    Field b(total);
    for (int k = 0; k < total; ++k) b[k] = s.sqrtg[k] * s.inv11[k];
    auto face = [&](int p, int q) { return 0.5 * (b[p] + b[q]) * (f[q] - f[p]) * ih; };
    for (int k = 0; k < N; ++k) {
      int kp = k + 1 == N ? 0 : k + 1;
      int km = k == 0 ? N - 1 : k - 1;
      out[k] = (face(k, kp) - face(km, k)) * ih / s.sqrtg[k];
    }
    return;
  }

  if (grid.kind == FiberKind::torus2) {
    int N1 = grid.n1, N2 = grid.n2;
    double ih1 = 1.0 / grid.h1, ih2 = 1.0 / grid.h2;
    Field b11(total), b12(total), b22(total);
    for (int k = 0; k < total; ++k) {
      b11[k] = s.sqrtg[k] * s.inv11[k];
      b12[k] = s.sqrtg[k] * s.inv12[k];
      b22[k] = s.sqrtg[k] * s.inv22[k];
    }
    Field df1 = partial(grid, f, 0), df2 = partial(grid, f, 1);
    auto face1 = [&](int p, int q) {
      return 0.5 * (b11[p] + b11[q]) * (f[q] - f[p]) * ih1 +
             0.25 * (b12[p] + b12[q]) * (df2[p] + df2[q]);
    };
    auto face2 = [&](int p, int q) {
      return 0.5 * (b22[p] + b22[q]) * (f[q] - f[p]) * ih2 +
             0.25 * (b12[p] + b12[q]) * (df1[p] + df1[q]);
    };
    for (int i = 0; i < N1; ++i) {
      int ip = i + 1 == N1 ? 0 : i + 1;
      int im = i == 0 ? N1 - 1 : i - 1;
      for (int j = 0; j < N2; ++j) {
        int jp = j + 1 == N2 ? 0 : j + 1;
        int jm = j == 0 ? N2 - 1 : j - 1;
        int k = i * N2 + j;
        out[k] = ((face1(k, ip * N2 + j) - face1(im * N2 + j, k)) * ih1 +
                  (face2(k, i * N2 + jp) - face2(i * N2 + jm, k)) * ih2) /
                 s.sqrtg[k];
      }
    }
    return;
  }

  // sphere, even scalar fields only (all identity-suite inputs are even)
  int N = grid.n1;
  double ih = 1.0 / grid.h1;
  Field b(total);
  for (int k = 0; k < total; ++k)
    b[k] = s.sqrtg[k] * s.inv11[k] / std::sqrt(grid.ghat22[k]);
  auto face = [&](int q) {
    int p = q - 1;
    double fp = p >= 0 ? f[p] : f[0];
    double fq = q < N ? f[q] : f[N - 1];
    double bp = p >= 0 ? b[p] : b[0];
    double bq = q < N ? b[q] : b[N - 1];
    return std::sin(q * grid.h1) * 0.5 * (bp + bq) * (fq - fp) * ih;
  };
  for (int k = 0; k < N; ++k) out[k] = (face(k + 1) - face(k)) * ih / s.sqrtg[k];
}

}  // namespace grw
