#pragma once

// Test-only reference computations. Nothing here calls the code paths they
// check: finite differences stand in for analytic gradients, and plain
// mixed-radix enumeration stands in for the matroid and assignment searches.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "hetsense/assignment.hpp"
#include "hetsense/scenario.hpp"

namespace oracle {

/// Central difference gradient of f at target position p.
inline std::array<double, 2> central_gradient(const std::function<double(hetsense::Vec2)>& f,
                                              hetsense::Vec2 p, double h) {
  const double gx = (f({p.x + h, p.y}) - f({p.x - h, p.y})) / (2.0 * h);
  const double gy = (f({p.x, p.y + h}) - f({p.x, p.y - h})) / (2.0 * h);
  return {gx, gy};
}

/// Calls visit(choice) for every map target -> {-1 (none), 0..n_units-1}
/// over the given targets, in mixed-radix order.
inline void for_each_choice(std::size_t n_units, const std::vector<int>& targets,
                            const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> choice(targets.size(), -1);
  while (true) {
    visit(choice);
    std::size_t i = 0;
    for (; i < choice.size(); ++i) {
      if (++choice[i] < static_cast<int>(n_units)) break;
      choice[i] = -1;
    }
    if (i == choice.size()) return;
  }
}

inline bool robot_disjoint(const std::vector<hetsense::AssignableUnit>& units,
                           const std::vector<int>& choice) {
  std::uint64_t used = 0;
  for (const int u : choice) {
    if (u < 0) continue;
    const auto m = units[static_cast<std::size_t>(u)].robot_mask();
    if (used & m) return false;
    used |= m;
  }
  return true;
}

/// Largest number of targets of s coverable with robot-disjoint units
/// (complete bipartite graph), by full enumeration.
inline int brute_rank(const std::vector<hetsense::AssignableUnit>& units, hetsense::TargetSet s) {
  int best = 0;
  for_each_choice(units.size(), s.members(), [&](const std::vector<int>& c) {
    if (!robot_disjoint(units, c)) return;
    int covered = 0;
    for (const int u : c) covered += u >= 0;
    best = std::max(best, covered);
  });
  return best;
}

/// Best total over all robot-disjoint partial assignments (-inf entries skipped).
inline double brute_optimum(const hetsense::QualityTable& q) {
  std::vector<int> targets;
  for (int t = 0; t < q.n_targets(); ++t) targets.push_back(t);
  double best = 0.0;
  for_each_choice(q.n_units(), targets, [&](const std::vector<int>& c) {
    if (!robot_disjoint(q.units(), c)) return;
    double total = 0.0;
    for (std::size_t t = 0; t < c.size(); ++t) {
      if (c[t] < 0) continue;
      const double v = q.at(static_cast<std::size_t>(c[t]), static_cast<int>(t));
      if (v == -INFINITY) return;
      total += v;
    }
    best = std::max(best, total);
  });
  return best;
}

}  // namespace oracle
