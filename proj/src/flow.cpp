#include "grw/flow.hpp"

#include <algorithm>
#include <cmath>

namespace grw {

double cfl_dt(const FiberGrid& grid, const GraphState& s, double cfl) {
  int total = grid.nodes();
  double n = grid.n;
  double dtmin = std::numeric_limits<double>::infinity();
  double h1s = grid.h1 * grid.h1;
  double h2s = grid.h2 * grid.h2;
  for (int k = 0; k < total; ++k) {
    double base = 2.0 * n * s.v[k] * s.th[k];
    double d1 = h1s / (base * s.inv11[k]);
    if (d1 < dtmin) dtmin = d1;
    if (grid.kind == FiberKind::torus2) {
      double d2 = h2s / (base * s.inv22[k]);
      if (d2 < dtmin) dtmin = d2;
    }
  }
  return cfl * dtmin;
}

void graph_speed(const GraphState& s, Field& out) {
  int total = (int)s.rho.size();
  out.resize(total);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < total; ++k) out[k] = s.v[k] * s.dtheta_div[k];
}

void flow_step(const FiberGrid& grid, const WarpingFactor& w, const GraphState& cur,
               double dt, Scheme scheme, double eps_v, GraphState& mid, Field& rho_mid,
               Field& rho_next) {
  int total = grid.nodes();
  rho_next.resize(total);
  if (scheme == Scheme::euler) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < total; ++k)
      rho_next[k] = cur.rho[k] + dt * (cur.v[k] * cur.dtheta_div[k]);
    return;
  }
  rho_mid.resize(total);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < total; ++k)
    rho_mid[k] = cur.rho[k] + 0.5 * dt * (cur.v[k] * cur.dtheta_div[k]);
  build_graph_state(grid, w, rho_mid, mid, BuildLevel::flow, eps_v);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < total; ++k)
    rho_next[k] = cur.rho[k] + dt * (mid.v[k] * mid.dtheta_div[k]);
}

namespace {

double sup_abs(const Field& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

// least-squares slope of ln(osc) over t for the trailing trace records
double fit_decay_rate(const std::vector<FlowRecord>& trace) {
  std::vector<std::pair<double, double>> pts;
  int last = (int)trace.size();
  int first = std::max(0, last - 8);
  for (int i = first; i < last; ++i)
    if (trace[i].osc > 0.0) pts.push_back({trace[i].t, std::log(trace[i].osc)});
  if (pts.size() < 3) return 0.0;
  double st = 0, sy = 0, stt = 0, sty = 0, m = (double)pts.size();
  for (auto& p : pts) {
    st += p.first;
    sy += p.second;
    stt += p.first * p.first;
    sty += p.first * p.second;
  }
  double denom = m * stt - st * st;
  if (denom <= 0.0) return 0.0;
  return -(m * sty - st * sy) / denom;
}

}  // namespace

FlowResult run_flow(const FiberGrid& grid, const WarpingFactor& w, const Field& rho0,
                    const FlowParams& p) {
  FlowResult R;
  GraphState cur, mid, nxt;
  build_graph_state(grid, w, rho0, cur, BuildLevel::flow, p.eps_v);
  R.initial_max_u = cur.max_u;

  Field rho_mid, rho_next;
  double t = 0.0;
  long step = 0;

  auto push_record = [&](long stp, double tt) {
    GraphState full = build_graph_state(grid, w, cur.rho, BuildLevel::full, p.eps_v);
    FlowRecord r;
    r.step = stp;
    r.t = tt;
    r.area = area(grid, full);
    r.volume = enclosed_volume(grid, w, full);
    r.osc = theta(w, full.max_rho) - theta(w, full.min_rho);
    r.sup_speed = sup_abs(full.dtheta_div);
    r.min_v2 = full.min_v2;
    r.max_u = full.max_u;
    r.umbilicity = umbilicity_deficit(grid, full);
    R.trace.push_back(r);
  };

  while (true) {
    R.area_series.push_back(area(grid, cur));
    double osc = theta(w, cur.max_rho) - theta(w, cur.min_rho);
    R.osc_series.push_back(osc);
    double sup = sup_abs(cur.dtheta_div);
    if (cur.max_u > p.u_ceiling_factor * R.initial_max_u) R.u_ceiling_exceeded = true;

    bool converged = osc < p.osc_tol && sup < p.speed_tol;
    bool timeout = !converged && (step >= p.max_steps || t >= p.t_max);
    bool record_now = step % p.record_stride == 0 || converged || timeout;
    if (record_now) push_record(step, t);
    if (converged) {
      R.verdict = "converged";
      break;
    }
    if (timeout) {
      R.verdict = "timeout";
      break;
    }

    double dt = cfl_dt(grid, cur, p.cfl);
    bool accepted = false;
    for (int att = 0; att <= p.max_halvings && !accepted; ++att) {
      try {
        flow_step(grid, w, cur, dt, p.scheme, p.eps_v, mid, rho_mid, rho_next);
        build_graph_state(grid, w, rho_next, nxt, BuildLevel::flow, p.eps_v);
        accepted = true;
      } catch (const SpacelikeViolation&) {
        dt *= 0.5;
      } catch (const std::domain_error&) {
        dt *= 0.5;
      }
    }
    if (!accepted) {
      R.verdict = "aborted";
      R.reason = "step rejected " + std::to_string(p.max_halvings + 1) +
                 " times at t = " + std::to_string(t);
      if (step % p.record_stride != 0) push_record(step, t);
      break;
    }
    std::swap(cur, nxt);
    t += dt;
    ++step;
  }

  R.steps = step;
  R.t_end = t;
  R.rho = cur.rho;
  R.osc_decay_rate = fit_decay_rate(R.trace);
  return R;
}

}  // namespace grw
