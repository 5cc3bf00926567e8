#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace grw {

using Field = std::vector<double>;

// Thrown when a graph stops being strictly spacelike (v^2 <= eps_v somewhere).
struct SpacelikeViolation : std::runtime_error {
  SpacelikeViolation(int node_, double v2_, double eps_)
      : std::runtime_error("spacelike violation: v^2 = " + std::to_string(v2_) +
                           " <= " + std::to_string(eps_) + " at node " +
                           std::to_string(node_)),
        node(node_),
        v2(v2_) {}
  int node;
  double v2;
};

struct InvalidWarping : std::domain_error {
  using std::domain_error::domain_error;
};

// Compensated (Neumaier) accumulator. All integral reductions go through this,
// serially and in a fixed order, so results do not depend on thread count.
struct CompensatedSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace grw
