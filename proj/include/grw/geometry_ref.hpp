#pragma once

#include "grw/geometry.hpp"

namespace grw {

// Serial reference build of the full graph state.  Implements the same
// discrete scheme as build_graph_state through one generic code path (no
// per-kind unrolling, no OpenMP) and is used to cross-check the optimized
// kernels and as the baseline in the benchmark.
GraphState reference_graph_state(const FiberGrid& grid, const WarpingFactor& w,
                                 const Field& rho, double eps_v = 1e-4);

}  // namespace grw
