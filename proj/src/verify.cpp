#include "grw/verify.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>

#include "grw/flow.hpp"

namespace grw {

namespace {

int fiber_dim_of(FiberKind k) { return k == FiberKind::torus1 ? 1 : 2; }

void fiber_ghat(FiberKind kind, const double* xi, double gh[2]) {
  gh[0] = 1.0;
  gh[1] = 1.0;
  if (kind == FiberKind::sphere2_axisym) {
    double s = std::sin(xi[0]);
    gh[1] = s * s;
  }
}

// fourth order first derivative from five samples at -2..2 delta
inline double stencil4(double m2, double m1, double p1, double p2, double delta) {
  return (m2 - p2 + 8.0 * (p1 - m1)) / (12.0 * delta);
}

void dmetric(const CurvatureOracle& O, const double* p, int m, double dg[3][3]) {
  double pp[3] = {p[0], p[1], p[2]};
  double gp2[3][3], gp1[3][3], gm1[3][3], gm2[3][3];
  pp[m] = p[m] + 2.0 * O.delta;
  O.metric(pp, gp2);
  pp[m] = p[m] + O.delta;
  O.metric(pp, gp1);
  pp[m] = p[m] - O.delta;
  O.metric(pp, gm1);
  pp[m] = p[m] - 2.0 * O.delta;
  O.metric(pp, gm2);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      dg[a][b] = stencil4(gm2[a][b], gm1[a][b], gp1[a][b], gp2[a][b], O.delta);
}

}  // namespace

void CurvatureOracle::metric(const double* p, double g[3][3]) const {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) g[a][b] = 0.0;
  double th = vartheta(w, p[0]);
  double gh[2];
  fiber_ghat(kind, p + 1, gh);
  g[0][0] = -1.0;
  int d = dim();
  for (int i = 1; i < d; ++i) g[i][i] = th * th * gh[i - 1];
}

void CurvatureOracle::inverse_metric(const double* p, double gi[3][3]) const {
  double g[3][3];
  metric(p, g);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) gi[a][b] = 0.0;
  if (dim() == 2) {
    double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    gi[0][0] = g[1][1] / det;
    gi[1][1] = g[0][0] / det;
    gi[0][1] = -g[0][1] / det;
    gi[1][0] = -g[1][0] / det;
    return;
  }
  double det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
               g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
               g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
  gi[0][0] = (g[1][1] * g[2][2] - g[1][2] * g[2][1]) / det;
  gi[0][1] = (g[0][2] * g[2][1] - g[0][1] * g[2][2]) / det;
  gi[0][2] = (g[0][1] * g[1][2] - g[0][2] * g[1][1]) / det;
  gi[1][0] = (g[1][2] * g[2][0] - g[1][0] * g[2][2]) / det;
  gi[1][1] = (g[0][0] * g[2][2] - g[0][2] * g[2][0]) / det;
  gi[1][2] = (g[0][2] * g[1][0] - g[0][0] * g[1][2]) / det;
  gi[2][0] = (g[1][0] * g[2][1] - g[1][1] * g[2][0]) / det;
  gi[2][1] = (g[0][1] * g[2][0] - g[0][0] * g[2][1]) / det;
  gi[2][2] = (g[0][0] * g[1][1] - g[0][1] * g[1][0]) / det;
}

void CurvatureOracle::christoffel(const double* p, double G[3][3][3]) const {
  int d = dim();
  double gi[3][3];
  inverse_metric(p, gi);
  double dg[3][3][3];
  for (int m = 0; m < d; ++m) dmetric(*this, p, m, dg[m]);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) G[a][b][c] = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double s = 0.0;
        for (int dd = 0; dd < d; ++dd)
          s += gi[a][dd] * (dg[b][dd][c] + dg[c][b][dd] - dg[dd][b][c]);
        G[a][b][c] = 0.5 * s;
      }
}

void CurvatureOracle::riemann(const double* p, double R[3][3][3][3]) const {
  int d = dim();
  double G[3][3][3];
  christoffel(p, G);
  // dG[m][a][b][c] = d_m Gamma^a_{bc}
  static thread_local double dG[3][3][3][3];
  double Gp2[3][3][3], Gp1[3][3][3], Gm1[3][3][3], Gm2[3][3][3];
  double pp[3] = {p[0], p[1], p[2]};
  for (int m = 0; m < d; ++m) {
    pp[m] = p[m] + 2.0 * delta;
    christoffel(pp, Gp2);
    pp[m] = p[m] + delta;
    christoffel(pp, Gp1);
    pp[m] = p[m] - delta;
    christoffel(pp, Gm1);
    pp[m] = p[m] - 2.0 * delta;
    christoffel(pp, Gm2);
    pp[m] = p[m];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          dG[m][a][b][c] =
              stencil4(Gm2[a][b][c], Gm1[a][b][c], Gp1[a][b][c], Gp2[a][b][c], delta);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) R[a][b][m][n] = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
          double s = dG[m][a][n][b] - dG[n][a][m][b];
          for (int l = 0; l < d; ++l)
            s += G[a][m][l] * G[l][n][b] - G[a][n][l] * G[l][m][b];
          R[a][b][m][n] = s;
        }
}

void CurvatureOracle::ricci(const double* p, double ric[3][3]) const {
  double R[3][3][3][3];
  riemann(p, R);
  int d = dim();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) ric[a][b] = 0.0;
  for (int b = 0; b < d; ++b)
    for (int n = 0; n < d; ++n) {
      double s = 0.0;
      for (int m = 0; m < d; ++m) s += R[m][b][m][n];
      ric[b][n] = s;
    }
}

double CurvatureOracle::ricci_vec(const double* p, const double* X, const double* Y) const {
  double ric[3][3];
  ricci(p, ric);
  int d = dim();
  double s = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s += ric[a][b] * X[a] * Y[b];
  return s;
}

double CurvatureOracle::self_test(const double* p) const {
  double R[3][3][3][3];
  riemann(p, R);
  int d = dim();
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
          worst = std::max(worst, std::abs(R[a][b][m][n] + R[a][b][n][m]));
          worst = std::max(worst,
                           std::abs(R[a][b][m][n] + R[a][m][n][b] + R[a][n][b][m]));
        }
  return worst;
}

void ambient_ricci_closed(const WarpingFactor& w, FiberKind kind, double lambda_hat,
                          const double* p, double ric[3][3]) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) ric[a][b] = 0.0;
  WarpingValues wv = eval(w, p[0]);
  int n = fiber_dim_of(kind);
  double gh[2];
  fiber_ghat(kind, p + 1, gh);
  ric[0][0] = -n * wv.thpp / wv.th;
  double fib = lambda_hat + wv.th * wv.thpp + (n - 1) * wv.thp * wv.thp;
  for (int i = 1; i <= n; ++i) ric[i][i] = fib * gh[i - 1];
}

SpatialResiduals spatial_residuals(const FiberGrid& grid, const WarpingFactor& w,
                                   const GraphState& s) {
  if (!s.full) throw std::logic_error("spatial residuals need a full graph state");
  int total = grid.nodes();
  SpatialResiduals R;

  Field du1 = partial(grid, s.u, 1, Parity::even);
  Field dH1 = partial(grid, s.H, 1, Parity::even);
  Field dT1 = partial(grid, s.theta_f, 1, Parity::even);
  Field du2, dH2, dT2;
  bool two = grid.kind == FiberKind::torus2;
  if (two) {
    du2 = partial(grid, s.u, 2, Parity::even);
    dH2 = partial(grid, s.H, 2, Parity::even);
    dT2 = partial(grid, s.theta_f, 2, Parity::even);
  }
  Field lbu;
  laplace_beltrami(grid, s, s.u, lbu);
  Field tn, ww;
  ambient_ricci_terms(grid, w, s, tn, ww);

  for (int k = 0; k < total; ++k) {
    double th = s.th[k];
    // d_i u = h_ij g^{jk} vartheta d_k rho
    if (two) {
      double a1 = s.inv11[k] * s.d1rho[k] + s.inv12[k] * s.d2rho[k];
      double a2 = s.inv12[k] * s.d1rho[k] + s.inv22[k] * s.d2rho[k];
      double r1 = du1[k] - th * (s.h11[k] * a1 + s.h12[k] * a2);
      double r2 = du2[k] - th * (s.h12[k] * a1 + s.h22[k] * a2);
      R.grad_u = std::max(R.grad_u, std::max(std::abs(r1), std::abs(r2)));
    } else {
      double r1 = du1[k] - th * s.h11[k] * s.inv11[k] * s.d1rho[k];
      R.grad_u = std::max(R.grad_u, std::abs(r1));
    }

    // LB u = g(grad H, grad Theta) + |A|^2 u + Ric(grad Theta, nu) - vartheta' H
    double ght;
    double gt2;
    if (two) {
      ght = th * (dH1[k] * (s.inv11[k] * s.d1rho[k] + s.inv12[k] * s.d2rho[k]) +
                  dH2[k] * (s.inv12[k] * s.d1rho[k] + s.inv22[k] * s.d2rho[k]));
      gt2 = s.inv11[k] * dT1[k] * dT1[k] + 2.0 * s.inv12[k] * dT1[k] * dT2[k] +
            s.inv22[k] * dT2[k] * dT2[k];
    } else {
      ght = th * dH1[k] * s.inv11[k] * s.d1rho[k];
      gt2 = s.inv11[k] * dT1[k] * dT1[k];
    }
    double rl = lbu[k] - (ght + s.normA2[k] * s.u[k] + tn[k] - s.thp[k] * s.H[k]);
    R.laplace_u = std::max(R.laplace_u, std::abs(rl));

    double rt = gt2 - (s.u[k] * s.u[k] - th * th);
    R.grad_theta2 = std::max(R.grad_theta2, std::abs(rt));

    R.trace_div = std::max(R.trace_div, std::abs(s.dtheta_trace[k] - s.dtheta_div[k]));
  }
  R.sigma2 = grid.n >= 2 ? std::abs(sigma2_integral_residual(grid, w, s)) : 0.0;
  return R;
}

namespace {

// Catmull-Rom interpolation of node fields at continuous fiber positions;
// wraps on tori, parity-reflects across the sphere poles.
inline double cr(double fm1, double f0, double f1, double f2, double s) {
  return f0 + 0.5 * s *
                  (f1 - fm1 +
                   s * (2.0 * fm1 - 5.0 * f0 + 4.0 * f1 - f2 +
                        s * (3.0 * (f0 - f1) + f2 - fm1)));
}

struct Interp {
  const FiberGrid& g;

  double fetch_wrap1(const Field& f, long ii) const {
    long n = g.n1;
    long m = ((ii % n) + n) % n;
    return f[m];
  }
  double fetch_sphere(const Field& f, long ii, Parity par) const {
    long n = g.n1;
    double sgn = 1.0;
    if (ii < 0) {
      ii = -1 - ii;
      if (par == Parity::odd) sgn = -1.0;
    } else if (ii >= n) {
      ii = 2 * n - 1 - ii;
      if (par == Parity::odd) sgn = -1.0;
    }
    return sgn * f[ii];
  }
  double fetch2(const Field& f, long ii, long jj) const {
    long m1 = ((ii % g.n1) + g.n1) % g.n1;
    long m2 = ((jj % g.n2) + g.n2) % g.n2;
    return f[m1 * g.n2 + m2];
  }

  double at(const Field& f, Parity par, double x1, double x2) const {
    if (g.kind == FiberKind::torus1) {
      double x = x1 / g.h1;
      long i0 = (long)std::floor(x);
      double s = x - (double)i0;
      return cr(fetch_wrap1(f, i0 - 1), fetch_wrap1(f, i0), fetch_wrap1(f, i0 + 1),
                fetch_wrap1(f, i0 + 2), s);
    }
    if (g.kind == FiberKind::sphere2_axisym) {
      double x = x1 / g.h1 - 0.5;
      long i0 = (long)std::floor(x);
      double s = x - (double)i0;
      return cr(fetch_sphere(f, i0 - 1, par), fetch_sphere(f, i0, par),
                fetch_sphere(f, i0 + 1, par), fetch_sphere(f, i0 + 2, par), s);
    }
    double x = x1 / g.h1, y = x2 / g.h2;
    long i0 = (long)std::floor(x), j0 = (long)std::floor(y);
    double s = x - (double)i0, t = y - (double)j0;
    double rows[4];
    for (int di = -1; di <= 2; ++di) {
      long ii = i0 + di;
      rows[di + 1] = cr(fetch2(f, ii, j0 - 1), fetch2(f, ii, j0), fetch2(f, ii, j0 + 1),
                        fetch2(f, ii, j0 + 2), t);
    }
    return cr(rows[0], rows[1], rows[2], rows[3], s);
  }
};

struct VelFields {
  Field vr, v1, v2;  // ambient components of LaplaceTheta * nu on the nodes
  Field nr, n1, n2;  // components of nu itself
};

VelFields velocity_fields(const FiberGrid& g, const GraphState& s) {
  int total = g.nodes();
  bool two = g.kind == FiberKind::torus2;
  VelFields V;
  V.vr.resize(total);
  V.v1.resize(total);
  V.nr.resize(total);
  V.n1.resize(total);
  if (two) {
    V.v2.resize(total);
    V.n2.resize(total);
  }
  for (int k = 0; k < total; ++k) {
    double ith2 = 1.0 / (s.th[k] * s.th[k]);
    V.nr[k] = 1.0 / s.v[k];
    V.n1[k] = s.d1rho[k] * ith2 / (g.ghat11[k] * s.v[k]);
    V.vr[k] = s.dtheta_div[k] * V.nr[k];
    V.v1[k] = s.dtheta_div[k] * V.n1[k];
    if (two) {
      V.n2[k] = s.d2rho[k] * ith2 / (g.ghat22[k] * s.v[k]);
      V.v2[k] = s.dtheta_div[k] * V.n2[k];
    }
  }
  return V;
}

struct Markers {
  Field r, x1, x2;
};

// one Heun hop using the velocity fields at the interval ends
void advance_markers(const FiberGrid& g, const Interp& I, const VelFields& A,
                     const VelFields& B, double dt, Markers& m) {
  bool two = g.kind == FiberKind::torus2;
  bool sph = g.kind == FiberKind::sphere2_axisym;
  Parity podd = sph ? Parity::odd : Parity::even;
  int total = (int)m.r.size();
  for (int k = 0; k < total; ++k) {
    double x2k = two ? m.x2[k] : 0.0;
    double ar = I.at(A.vr, Parity::even, m.x1[k], x2k);
    double a1 = I.at(A.v1, podd, m.x1[k], x2k);
    double a2 = two ? I.at(A.v2, Parity::even, m.x1[k], x2k) : 0.0;
    double x1p = m.x1[k] + dt * a1;
    double x2p = x2k + dt * a2;
    double br = I.at(B.vr, Parity::even, x1p, x2p);
    double b1 = I.at(B.v1, podd, x1p, x2p);
    double b2 = two ? I.at(B.v2, Parity::even, x1p, x2p) : 0.0;
    m.r[k] += 0.5 * dt * (ar + br);
    m.x1[k] += 0.5 * dt * (a1 + b1);
    if (two) m.x2[k] += 0.5 * dt * (a2 + b2);
  }
}

// closed-form ambient Christoffel symbols at (r, theta); indices 0 = r
void ambient_gamma(const WarpingFactor& w, FiberKind kind, double r, double theta_coord,
                   double G[3][3][3]) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) G[a][b][c] = 0.0;
  WarpingValues wv = eval(w, r);
  double xi[2] = {theta_coord, 0.0};
  double gh[2];
  fiber_ghat(kind, xi, gh);
  int n = fiber_dim_of(kind);
  double ratio = wv.thp / wv.th;
  for (int i = 1; i <= n; ++i) {
    G[0][i][i] = wv.th * wv.thp * gh[i - 1];
    G[i][0][i] = ratio;
    G[i][i][0] = ratio;
  }
  if (kind == FiberKind::sphere2_axisym) {
    double st = std::sin(theta_coord), ct = std::cos(theta_coord);
    G[1][2][2] = -st * ct;
    G[2][1][2] = ct / st;
    G[2][2][1] = ct / st;
  }
}

double wrap_gap(double d, double L) { return d - L * std::round(d / L); }

}  // namespace

EvolutionResiduals evolution_residuals(const FiberGrid& grid, const WarpingFactor& w,
                                       const Field& rho0, double cfl, double eps_v) {
  bool two = grid.kind == FiberKind::torus2;
  bool sph = grid.kind == FiberKind::sphere2_axisym;
  Parity podd = sph ? Parity::odd : Parity::even;
  int total = grid.nodes();

  GraphState S0 = build_graph_state(grid, w, rho0, BuildLevel::flow, eps_v);
  double dt = cfl_dt(grid, S0, cfl);
  GraphState scratch;
  Field rho_mid, rho1, rho2;
  flow_step(grid, w, S0, dt, Scheme::rk2, eps_v, scratch, rho_mid, rho1);
  GraphState S1 = build_graph_state(grid, w, rho1, BuildLevel::full, eps_v);
  flow_step(grid, w, S1, dt, Scheme::rk2, eps_v, scratch, rho_mid, rho2);
  GraphState S2 = build_graph_state(grid, w, rho2, BuildLevel::flow, eps_v);

  VelFields V0 = velocity_fields(grid, S0);
  VelFields V1 = velocity_fields(grid, S1);
  VelFields V2 = velocity_fields(grid, S2);
  Interp I{grid};

  // markers launched from every node, advanced through both steps
  Markers M0, M1, M2;
  M0.r = rho0;
  M0.x1.resize(total);
  if (two) M0.x2.resize(total);
  for (int k = 0; k < total; ++k) {
    M0.x1[k] = grid.coord1[two ? k / grid.n2 : k];
    if (two) M0.x2[k] = grid.coord2[k % grid.n2];
  }
  M1 = M0;
  advance_markers(grid, I, V0, V1, dt, M1);
  M2 = M1;
  advance_markers(grid, I, V1, V2, dt, M2);

  // node fields of the middle state entering the laws
  Field lbu;
  laplace_beltrami(grid, S1, S1.u, lbu);
  Field tn, ww;
  ambient_ricci_terms(grid, w, S1, tn, ww);
  Field du1 = partial(grid, S1.u, 1, Parity::even);
  Field dH1 = partial(grid, S1.H, 1, Parity::even);
  Field du2, dH2;
  if (two) {
    du2 = partial(grid, S1.u, 2, Parity::even);
    dH2 = partial(grid, S1.H, 2, Parity::even);
  }
  int n = grid.n;
  Field u_lbu(total), rhs_u(total);
  Field gh_r(total), gh_1(total), gh_2(two ? total : 0);
  Field gu_r(total), gu_1(total), gu_2(two ? total : 0);
  Field gt_r(total), gt_1(total), gt_2(two ? total : 0);
  Field rhs_nu_r(total), rhs_nu_1(total), rhs_nu_2(two ? total : 0);
  for (int k = 0; k < total; ++k) {
    double th = S1.th[k], thp = S1.thp[k], thpp = S1.thpp[k];
    double u = S1.u[k], H = S1.H[k], dth = S1.dtheta_div[k];
    u_lbu[k] = u * lbu[k];
    double gH1, gH2 = 0.0, gU1, gU2 = 0.0;
    if (two) {
      gH1 = S1.inv11[k] * dH1[k] + S1.inv12[k] * dH2[k];
      gH2 = S1.inv12[k] * dH1[k] + S1.inv22[k] * dH2[k];
      gU1 = S1.inv11[k] * du1[k] + S1.inv12[k] * du2[k];
      gU2 = S1.inv12[k] * du1[k] + S1.inv22[k] * du2[k];
    } else {
      gH1 = S1.inv11[k] * dH1[k];
      gU1 = S1.inv11[k] * du1[k];
    }
    gh_1[k] = gH1;
    gu_1[k] = gU1;
    gh_r[k] = gH1 * S1.d1rho[k];
    gu_r[k] = gU1 * S1.d1rho[k];
    if (two) {
      gh_2[k] = gH2;
      gu_2[k] = gU2;
      gh_r[k] += gH2 * S1.d2rho[k];
      gu_r[k] += gU2 * S1.d2rho[k];
    }
    gt_r[k] = -th + u * V1.nr[k];
    gt_1[k] = u * V1.n1[k];
    if (two) gt_2[k] = u * V1.n2[k];

    double ght = th * gu_r[k];  // g(grad u, grad Theta) = vartheta du(grad rho)
    rhs_u[k] = thp * dth + H * ght - n * (thpp / th) * (u * u - th * th) -
               S1.normA2[k] * u * u - u * tn[k] + thp * u * H;
    double fac = n * thpp / th;
    rhs_nu_r[k] = u * gh_r[k] + H * gu_r[k] - fac * gt_r[k];
    rhs_nu_1[k] = u * gh_1[k] + H * gu_1[k] - fac * gt_1[k];
    if (two) rhs_nu_2[k] = u * gh_2[k] + H * gu_2[k] - fac * gt_2[k];
  }

  EvolutionResiduals R;
  double twodt = 2.0 * dt;
  for (int k = 0; k < total; ++k) {
    double x2m = two ? M1.x2[k] : 0.0;
    double x20 = two ? M0.x2[k] : 0.0;
    double x22 = two ? M2.x2[k] : 0.0;

    double u_m = I.at(S1.u, Parity::even, M1.x1[k], x2m);
    double dth_m = I.at(S1.dtheta_div, Parity::even, M1.x1[k], x2m);

    double lhs_th = (theta(w, M2.r[k]) - theta(w, M0.r[k])) / twodt;
    R.theta_law = std::max(R.theta_law, std::abs(lhs_th - u_m * dth_m));

    double u0 = I.at(S0.u, Parity::even, M0.x1[k], x20);
    double u2 = I.at(S2.u, Parity::even, M2.x1[k], x22);
    double lhs_u = (u2 - u0) / twodt - I.at(u_lbu, Parity::even, M1.x1[k], x2m);
    R.u_law = std::max(R.u_law, std::abs(lhs_u - I.at(rhs_u, Parity::even, M1.x1[k], x2m)));

    // covariant rate of nu along the flow velocity
    double nu0[3] = {I.at(V0.nr, Parity::even, M0.x1[k], x20),
                     I.at(V0.n1, podd, M0.x1[k], x20),
                     two ? I.at(V0.n2, Parity::even, M0.x1[k], x20) : 0.0};
    double nu2[3] = {I.at(V2.nr, Parity::even, M2.x1[k], x22),
                     I.at(V2.n1, podd, M2.x1[k], x22),
                     two ? I.at(V2.n2, Parity::even, M2.x1[k], x22) : 0.0};
    double num[3] = {I.at(V1.nr, Parity::even, M1.x1[k], x2m),
                     I.at(V1.n1, podd, M1.x1[k], x2m),
                     two ? I.at(V1.n2, Parity::even, M1.x1[k], x2m) : 0.0};
    double xdot[3] = {dth_m * num[0], dth_m * num[1], dth_m * num[2]};
    double G[3][3][3];
    ambient_gamma(w, grid.kind, M1.r[k], M1.x1[k], G);
    double rhs_nu[3] = {I.at(rhs_nu_r, Parity::even, M1.x1[k], x2m),
                        I.at(rhs_nu_1, podd, M1.x1[k], x2m),
                        two ? I.at(rhs_nu_2, Parity::even, M1.x1[k], x2m) : 0.0};
    int dim = 1 + (two || sph ? 2 : 1);
    for (int a = 0; a < dim; ++a) {
      if (sph && a == 2) continue;  // axisymmetric: phi components vanish identically
      double corr = 0.0;
      for (int b = 0; b < dim; ++b)
        for (int c = 0; c < dim; ++c) corr += G[a][b][c] * xdot[b] * nu0[c];
      double lhs = (nu2[a] - nu0[a]) / twodt + corr;
      R.nu_law = std::max(R.nu_law, std::abs(lhs - rhs_nu[a]));
    }
  }

  // metric evolution on advected coordinate gaps
  auto pair_residual = [&](int k, int p, int dir) {
    auto gap = [&](const Markers& M, double out[3]) {
      out[0] = M.r[p] - M.r[k];
      double d1 = M.x1[p] - M.x1[k];
      if (!sph) d1 = wrap_gap(d1, grid.L1);
      out[1] = d1;
      out[2] = two ? wrap_gap(M.x2[p] - M.x2[k], grid.L2) : 0.0;
    };
    auto qval = [&](const Markers& M) {
      double d[3];
      gap(M, d);
      double rm = 0.5 * (M.r[k] + M.r[p]);
      double x1m = M.x1[k] + 0.5 * d[1];
      double xi[2] = {x1m, 0.0};
      double gh[2];
      fiber_ghat(grid.kind, xi, gh);
      double th = vartheta(w, rm);
      return -d[0] * d[0] + th * th * (gh[0] * d[1] * d[1] + gh[1] * d[2] * d[2]);
    };
    double q0 = qval(M0), q2 = qval(M2);
    double d[3];
    gap(M1, d);
    double x1m = M1.x1[k] + 0.5 * d[1];
    double x2m = two ? M1.x2[k] + 0.5 * wrap_gap(M1.x2[p] - M1.x2[k], grid.L2) : 0.0;
    double h11 = I.at(S1.h11, Parity::even, x1m, x2m);
    double h12 = two ? I.at(S1.h12, Parity::even, x1m, x2m) : 0.0;
    double h22 = (two || sph) ? I.at(S1.h22, Parity::even, x1m, x2m) : 0.0;
    double dth_m = I.at(S1.dtheta_div, Parity::even, x1m, x2m);
    double hdd = h11 * d[1] * d[1] + 2.0 * h12 * d[1] * d[2] + h22 * d[2] * d[2];
    double gapsz = dir == 1 ? grid.h1 : grid.h2;
    return std::abs((q2 - q0) / twodt - 2.0 * dth_m * hdd) / (gapsz * gapsz);
  };

  if (grid.kind == FiberKind::torus1) {
    for (int i = 0; i < grid.n1; ++i)
      R.g_law = std::max(R.g_law, pair_residual(i, (i + 1) % grid.n1, 1));
  } else if (sph) {
    for (int i = 0; i + 1 < grid.n1; ++i)
      R.g_law = std::max(R.g_law, pair_residual(i, i + 1, 1));
  } else {
    for (int i = 0; i < grid.n1; ++i)
      for (int j = 0; j < grid.n2; ++j) {
        int k = grid.idx(i, j);
        R.g_law = std::max(R.g_law, pair_residual(k, grid.idx((i + 1) % grid.n1, j), 1));
        R.g_law = std::max(R.g_law, pair_residual(k, grid.idx(i, (j + 1) % grid.n2), 2));
      }
  }
  return R;
}

namespace {

void sample_point(std::mt19937_64& rng, const WarpingFactor& w, FiberKind kind, double* p) {
  double span = w.b - w.a;
  std::uniform_real_distribution<double> Ur(w.a + 0.1 * span, w.b - 0.1 * span);
  std::uniform_real_distribution<double> Ux(0.0, 2.0 * 3.14159265358979323846);
  std::uniform_real_distribution<double> Ut(0.2, 3.14159265358979323846 - 0.2);
  p[0] = Ur(rng);
  if (kind == FiberKind::sphere2_axisym) {
    p[1] = Ut(rng);
    p[2] = Ux(rng);
  } else {
    p[1] = Ux(rng);
    p[2] = Ux(rng);
  }
}

}  // namespace

VerifyReport run_verification(const std::vector<FiberGrid>& grids, const WarpingFactor& w,
                              const std::function<Field(const FiberGrid&)>& graph_of,
                              const VerifyOptions& opt) {
  if (grids.size() < 2) throw std::invalid_argument("need at least two grid resolutions");
  VerifyReport rep;
  auto add = [&](const std::string& name, double value, double thr, bool upper) {
    VerifyCheck c;
    c.name = name;
    c.value = value;
    c.threshold = thr;
    c.is_upper_bound = upper;
    c.pass = upper ? value <= thr : value >= thr;
    rep.pass = rep.pass && c.pass;
    rep.checks.push_back(c);
  };

  const FiberGrid& fine = grids.back();
  FiberKind kind = fine.kind;
  CurvatureOracle O{w, kind, opt.delta};
  std::mt19937_64 rng(opt.seed);

  double worst_self = 0.0, worst_amb = 0.0;
  for (int i = 0; i < opt.points; ++i) {
    double p[3];
    sample_point(rng, w, kind, p);
    worst_self = std::max(worst_self, O.self_test(p));
    double rc[3][3], ro[3][3];
    ambient_ricci_closed(w, kind, fine.lambda_hat, p, rc);
    O.ricci(p, ro);
    for (int a = 0; a < O.dim(); ++a)
      for (int b = 0; b < O.dim(); ++b)
        worst_amb = std::max(worst_amb, std::abs(rc[a][b] - ro[a][b]));
  }
  add("oracle_self_test", worst_self, opt.selftest_tol, true);
  add("ambient_ricci_vs_oracle", worst_amb, opt.oracle_tol, true);

  // graph-level contraction Ric(grad Theta, nu) against the oracle
  {
    GraphState s = build_graph_state(fine, w, graph_of(fine), BuildLevel::full, opt.eps_v);
    Field tn, ww;
    ambient_ricci_terms(fine, w, s, tn, ww);
    bool two = kind == FiberKind::torus2;
    double span = w.b - w.a;
    std::uniform_int_distribution<int> Uk(0, fine.nodes() - 1);
    double worst_graph = 0.0;
    int tried = 0;
    for (int i = 0; i < 8 * opt.points && tried < opt.points; ++i) {
      int k = Uk(rng);
      double rho = s.rho[k];
      if (rho < w.a + 0.05 * span || rho > w.b - 0.05 * span) continue;
      ++tried;
      double p[3] = {rho, fine.coord1[two ? k / fine.n2 : k],
                     two ? fine.coord2[k % fine.n2] : 1.234};
      double th = s.th[k], v = s.v[k], u = s.u[k];
      double ith2 = 1.0 / (th * th);
      double nu[3] = {1.0 / v, s.d1rho[k] * ith2 / (fine.ghat11[k] * v),
                      two ? s.d2rho[k] * ith2 / (fine.ghat22[k] * v) : 0.0};
      double X[3] = {-th + u * nu[0], u * nu[1], u * nu[2]};
      worst_graph = std::max(worst_graph, std::abs(O.ricci_vec(p, X, nu) - tn[k]));
    }
    add("graph_ricci_vs_oracle", worst_graph, opt.oracle_tol, true);
  }

  // refinement orders of the identity residuals
  std::vector<SpatialResiduals> spat;
  std::vector<EvolutionResiduals> evo;
  for (const FiberGrid& g : grids) {
    Field rho = graph_of(g);
    GraphState s = build_graph_state(g, w, rho, BuildLevel::full, opt.eps_v);
    spat.push_back(spatial_residuals(g, w, s));
    evo.push_back(evolution_residuals(g, w, rho, opt.cfl, opt.eps_v));
  }
  size_t last = grids.size() - 1;
  double lr = std::log(grids[last - 1].h1 / grids[last].h1);
  auto order_of = [&](double rc, double rf) {
    if (rf < 1e-13 && rc < 1e-13) return opt.min_spatial_order;  // vanishes identically
    return std::log(rc / rf) / lr;
  };
  add("grad_u_order", order_of(spat[last - 1].grad_u, spat[last].grad_u),
      opt.min_spatial_order, false);
  add("laplace_u_order", order_of(spat[last - 1].laplace_u, spat[last].laplace_u),
      opt.min_spatial_order, false);
  add("grad_theta2_order", order_of(spat[last - 1].grad_theta2, spat[last].grad_theta2),
      opt.min_spatial_order, false);
  add("trace_div_order", order_of(spat[last - 1].trace_div, spat[last].trace_div),
      opt.min_spatial_order, false);
  if (fine.n >= 2)
    add("sigma2_order", order_of(spat[last - 1].sigma2, spat[last].sigma2),
        opt.min_spatial_order, false);

  auto decay_of = [&](double rc, double rf) {
    if (rf < 1e-13 && rc < 1e-13) return opt.min_marker_decay;
    return rc / rf;
  };
  add("theta_law_decay", decay_of(evo[last - 1].theta_law, evo[last].theta_law),
      opt.min_marker_decay, false);
  add("g_law_decay", decay_of(evo[last - 1].g_law, evo[last].g_law), opt.min_marker_decay,
      false);
  add("nu_law_decay", decay_of(evo[last - 1].nu_law, evo[last].nu_law),
      opt.min_marker_decay, false);
  add("u_law_decay", decay_of(evo[last - 1].u_law, evo[last].u_law), opt.min_marker_decay,
      false);
  return rep;
}

}  // namespace grw
