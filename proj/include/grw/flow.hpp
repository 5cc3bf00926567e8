#pragma once

#include <limits>
#include <string>
#include <vector>

#include "grw/integrals.hpp"

namespace grw {

enum class Scheme { euler, rk2 };

struct FlowParams {
  Scheme scheme = Scheme::rk2;
  double cfl = 0.2;
  double eps_v = 1e-4;
  double osc_tol = 1e-6;    // convergence: Theta oscillation below this ...
  double speed_tol = 1e-8;  // ... and sup |LaplaceTheta| below this
  long max_steps = 200000;
  double t_max = std::numeric_limits<double>::infinity();
  long record_stride = 100;
  int max_halvings = 10;            // step rejections before giving up
  double u_ceiling_factor = 2.0;    // monitor: flag if max u exceeds this times its start value
};

struct FlowRecord {
  long step;
  double t, area, volume, osc, sup_speed, min_v2, max_u, umbilicity;
};

struct FlowResult {
  std::string verdict;  // converged | timeout | aborted
  std::string reason;   // set when aborted
  long steps = 0;
  double t_end = 0.0;
  Field rho;  // final graph
  std::vector<FlowRecord> trace;
  std::vector<double> area_series;  // one entry per visited step, including the last
  std::vector<double> osc_series;
  bool u_ceiling_exceeded = false;
  double initial_max_u = 0.0;
  double osc_decay_rate = 0.0;  // fitted exponential rate of the oscillation tail
};

// largest stable explicit step: cfl * min over nodes and grid directions of
// h_i^2 / (2 n v vartheta g^{ii})
double cfl_dt(const FiberGrid& grid, const GraphState& s, double cfl);

// graphical normal speed d rho / dt = v LaplaceTheta
void graph_speed(const GraphState& s, Field& out);

// advance one step from a built flow-level state; fills rho_next and returns
// the midpoint workspace through `mid` for rk2
void flow_step(const FiberGrid& grid, const WarpingFactor& w, const GraphState& cur,
               double dt, Scheme scheme, double eps_v, GraphState& mid, Field& rho_mid,
               Field& rho_next);

FlowResult run_flow(const FiberGrid& grid, const WarpingFactor& w, const Field& rho0,
                    const FlowParams& params);

}  // namespace grw
