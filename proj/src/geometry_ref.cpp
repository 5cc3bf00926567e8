#include "grw/geometry_ref.hpp"

#include <cmath>

namespace grw {

namespace {

struct RefGrid {
  const FiberGrid& g;
  int N1, N2;
  bool torus2, sphere;

  explicit RefGrid(const FiberGrid& grid)
      : g(grid),
        N1(grid.n1),
        N2(grid.kind == FiberKind::torus2 ? grid.n2 : 1),
        torus2(grid.kind == FiberKind::torus2),
        sphere(grid.kind == FiberKind::sphere2_axisym) {}

  // neighbor value along direction 1; torus wraps, sphere reflects across the
  // poles with the parity sign
  double at1(const Field& f, int i, int j, int di, Parity par) const {
    int ii = i + di;
    double sgn = 1.0;
    if (sphere) {
      if (ii < 0) {
        ii = -1 - ii;
        if (par == Parity::odd) sgn = -1.0;
      } else if (ii >= N1) {
        ii = 2 * N1 - 1 - ii;
        if (par == Parity::odd) sgn = -1.0;
      }
    } else {
      ii = (ii % N1 + N1) % N1;
    }
    return sgn * f[ii * N2 + j];
  }

  double at2(const Field& f, int i, int j, int dj) const {
    int jj = ((j + dj) % N2 + N2) % N2;
    return f[i * N2 + jj];
  }

  double d1(const Field& f, int i, int j, Parity par) const {
    return (at1(f, i, j, 1, par) - at1(f, i, j, -1, par)) / (2.0 * g.h1);
  }

  double d2(const Field& f, int i, int j) const {
    if (!torus2) return 0.0;
    return (at2(f, i, j, 1) - at2(f, i, j, -1)) / (2.0 * g.h2);
  }

  double dd11(const Field& f, int i, int j, Parity par) const {
    return (at1(f, i, j, 1, par) - 2.0 * f[i * N2 + j] + at1(f, i, j, -1, par)) /
           (g.h1 * g.h1);
  }

  double dd22(const Field& f, int i, int j) const {
    if (!torus2) return 0.0;
    return (at2(f, i, j, 1) - 2.0 * f[i * N2 + j] + at2(f, i, j, -1)) / (g.h2 * g.h2);
  }

  double dd12(const Field& f, int i, int j) const {
    if (!torus2) return 0.0;
    int ip = (i + 1) % N1, im = (i + N1 - 1) % N1;
    int jp = (j + 1) % N2, jm = (j + N2 - 1) % N2;
    return (f[ip * N2 + jp] - f[ip * N2 + jm] - f[im * N2 + jp] + f[im * N2 + jm]) /
           (4.0 * g.h1 * g.h2);
  }
};

}  // namespace

GraphState reference_graph_state(const FiberGrid& grid, const WarpingFactor& w,
                                 const Field& rho, double eps_v) {
  RefGrid G(grid);
  int total = grid.nodes();
  if ((int)rho.size() != total) throw std::domain_error("rho size does not match grid");
  bool two = grid.n == 2;

  GraphState s;
  s.rho = rho;
  s.d1rho.resize(total);
  if (G.torus2) s.d2rho.resize(total);
  s.th.resize(total);
  s.thp.resize(total);
  s.thpp.resize(total);
  s.theta_f.resize(total);
  s.v2.resize(total);
  s.v.resize(total);
  s.u.resize(total);
  s.g11.resize(total);
  if (G.torus2) s.g12.resize(total);
  if (two) s.g22.resize(total);
  s.inv11.resize(total);
  if (G.torus2) s.inv12.resize(total);
  if (two) s.inv22.resize(total);
  s.detg.resize(total);
  s.sqrtg.resize(total);
  s.c11.resize(total);
  if (G.torus2) {
    s.c12.resize(total);
    s.c22.resize(total);
  }
  s.dtheta_div.resize(total);
  s.dtheta_trace.resize(total);
  s.H.resize(total);
  s.normA2.resize(total);
  s.ringA2.resize(total);
  s.h11.resize(total);
  if (G.torus2) s.h12.resize(total);
  if (two) s.h22.resize(total);

  s.min_v2 = 2.0;
  s.max_u = 0.0;
  s.min_rho = rho[0];
  s.max_rho = rho[0];

  for (int i = 0; i < G.N1; ++i) {
    for (int j = 0; j < G.N2; ++j) {
      int k = i * G.N2 + j;
      WarpingValues wv = eval(w, rho[k]);
      double p = G.d1(rho, i, j, Parity::even);
      double q = G.d2(rho, i, j);
      s.d1rho[k] = p;
      if (G.torus2) s.d2rho[k] = q;
      s.th[k] = wv.th;
      s.thp[k] = wv.thp;
      s.thpp[k] = wv.thpp;
      s.theta_f[k] = wv.theta;
      double grad2 = p * p / grid.ghat11[k];
      if (G.torus2) grad2 += q * q / grid.ghat22[k];
      double v2 = 1.0 - grad2 / (wv.th * wv.th);
      if (v2 <= eps_v) throw SpacelikeViolation(k, v2, eps_v);
      double v = std::sqrt(v2);
      s.v2[k] = v2;
      s.v[k] = v;
      s.u[k] = wv.th / v;
      double g11 = -p * p + wv.th * wv.th * grid.ghat11[k];
      double g12 = -p * q;
      double g22 = two ? -q * q + wv.th * wv.th * grid.ghat22[k] : 1.0;
      s.g11[k] = g11;
      if (G.torus2) s.g12[k] = g12;
      if (two) s.g22[k] = g22;
      double det = two ? g11 * g22 - g12 * g12 : g11;
      s.detg[k] = det;
      double sg = std::sqrt(det);
      s.sqrtg[k] = sg;
      double i11, i12 = 0.0, i22 = 0.0;
      if (two) {
        i11 = g22 / det;
        i12 = -g12 / det;
        i22 = g11 / det;
      } else {
        i11 = 1.0 / g11;
      }
      s.inv11[k] = i11;
      if (G.torus2) s.inv12[k] = i12;
      if (two) s.inv22[k] = i22;
      if (G.sphere) {
        s.c11[k] = sg * i11 * wv.th / std::sqrt(grid.ghat22[k]);
      } else {
        s.c11[k] = sg * i11 * wv.th;
        if (G.torus2) {
          s.c12[k] = sg * i12 * wv.th;
          s.c22[k] = sg * i22 * wv.th;
        }
      }
      if (v2 < s.min_v2) s.min_v2 = v2;
      if (s.u[k] > s.max_u) s.max_u = s.u[k];
      if (rho[k] < s.min_rho) s.min_rho = rho[k];
      if (rho[k] > s.max_rho) s.max_rho = rho[k];
    }
  }

  // divergence-form Laplacian of Theta via face fluxes
  for (int i = 0; i < G.N1; ++i) {
    for (int j = 0; j < G.N2; ++j) {
      int k = i * G.N2 + j;
      double acc = 0.0;
      if (G.sphere) {
        auto face = [&](int q2) {  // face at theta = q2 h1
          int pn = q2 - 1 >= 0 ? q2 - 1 : 0;
          int qn = q2 < G.N1 ? q2 : G.N1 - 1;
          return std::sin(q2 * grid.h1) * 0.5 * (s.c11[pn] + s.c11[qn]) *
                 (rho[qn] - rho[pn]) / grid.h1;
        };
        acc = (face(i + 1) - face(i)) / grid.h1;
      } else {
        int ip = (i + 1) % G.N1, im = (i + G.N1 - 1) % G.N1;
        auto face1 = [&](int a, int b) {
          double f = 0.5 * (s.c11[a] + s.c11[b]) * (rho[b] - rho[a]) / grid.h1;
          if (G.torus2) f += 0.25 * (s.c12[a] + s.c12[b]) * (s.d2rho[a] + s.d2rho[b]);
          return f;
        };
        acc = (face1(k, ip * G.N2 + j) - face1(im * G.N2 + j, k)) / grid.h1;
        if (G.torus2) {
          int jp = (j + 1) % G.N2, jm = (j + G.N2 - 1) % G.N2;
          auto face2 = [&](int a, int b) {
            return 0.5 * (s.c22[a] + s.c22[b]) * (rho[b] - rho[a]) / grid.h2 +
                   0.25 * (s.c12[a] + s.c12[b]) * (s.d1rho[a] + s.d1rho[b]);
          };
          acc += (face2(k, i * G.N2 + jp) - face2(i * G.N2 + jm, k)) / grid.h2;
        }
      }
      s.dtheta_div[k] = acc / s.sqrtg[k];
    }
  }

  // Christoffel symbols from the metric components, then the graph Hessian,
  // the shape operator, and the curvature scalars
  for (int i = 0; i < G.N1; ++i) {
    for (int j = 0; j < G.N2; ++j) {
      int k = i * G.N2 + j;
      double gi[2][2] = {{s.inv11[k], G.torus2 ? s.inv12[k] : 0.0},
                         {G.torus2 ? s.inv12[k] : 0.0, two ? s.inv22[k] : 1.0}};
      // dg[d][a][b] = partial_d g_{ab}
      double dg[2][2][2] = {};
      dg[0][0][0] = G.d1(s.g11, i, j, Parity::even);
      if (two) dg[0][1][1] = G.d1(s.g22, i, j, Parity::even);
      if (G.torus2) {
        dg[0][0][1] = dg[0][1][0] = G.d1(s.g12, i, j, Parity::even);
        dg[1][0][0] = G.d2(s.g11, i, j);
        dg[1][0][1] = dg[1][1][0] = G.d2(s.g12, i, j);
        dg[1][1][1] = G.d2(s.g22, i, j);
      }
      double Gam[2][2][2] = {};
      int dim = two ? 2 : 1;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          for (int c = 0; c < dim; ++c) {
            double sum = 0.0;
            for (int d = 0; d < dim; ++d)
              sum += gi[a][d] * (dg[b][d][c] + dg[c][b][d] - dg[d][b][c]);
            Gam[a][b][c] = 0.5 * sum;
          }
      double dr[2] = {s.d1rho[k], G.torus2 ? s.d2rho[k] : 0.0};
      double dd[2][2] = {};
      dd[0][0] = G.dd11(rho, i, j, Parity::even);
      if (G.torus2) {
        dd[1][1] = G.dd22(rho, i, j);
        dd[0][1] = dd[1][0] = G.dd12(rho, i, j);
      }
      double ghat[2][2] = {{grid.ghat11[k], 0.0}, {0.0, two ? grid.ghat22[k] : 0.0}};
      double tt = s.th[k] * s.thp[k];
      double h[2][2];
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          double hess = dd[a][b];
          for (int c = 0; c < dim; ++c) hess -= Gam[c][a][b] * dr[c];
          h[a][b] = s.v[k] * (hess + tt * ghat[a][b]);
        }
      s.h11[k] = h[0][0];
      if (G.torus2) s.h12[k] = h[0][1];
      if (two) s.h22[k] = h[1][1];
      double M[2][2] = {};
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          for (int c = 0; c < dim; ++c) M[a][b] += gi[a][c] * h[c][b];
      double H = 0.0, nA2 = 0.0;
      for (int a = 0; a < dim; ++a) H += M[a][a];
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) nA2 += M[a][b] * M[b][a];
      s.H[k] = H;
      s.normA2[k] = nA2;
      s.ringA2[k] = two ? nA2 - 0.5 * H * H : 0.0;
      s.dtheta_trace[k] = s.u[k] * H - grid.n * s.thp[k];
    }
  }

  s.full = true;
  return s;
}

}  // namespace grw
