#include "hetsense/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "hetsense/errors.hpp"
#include "hetsense/observability.hpp"

namespace hetsense {

// ---------------------------------------------------------------- units

AssignableUnit AssignableUnit::solo(int robot) {
  if (robot < 0 || robot >= 64) throw std::invalid_argument("robot index out of range");
  return AssignableUnit(Kind::Solo, robot, -1);
}

AssignableUnit AssignableUnit::pair(int a, int b) {
  if (a == b) throw std::invalid_argument("pair needs two distinct robots");
  if (a < 0 || b < 0 || a >= 64 || b >= 64) throw std::invalid_argument("robot index out of range");
  return AssignableUnit(Kind::Pair, std::min(a, b), std::max(a, b));
}

std::uint64_t AssignableUnit::robot_mask() const {
  std::uint64_t m = std::uint64_t{1} << first_;
  if (kind_ == Kind::Pair) m |= std::uint64_t{1} << second_;
  return m;
}

std::string AssignableUnit::label() const {
  if (kind_ == Kind::Solo) return "S" + std::to_string(first_);
  return "P" + std::to_string(first_) + "-" + std::to_string(second_);
}

AssignableUnit AssignableUnit::parse(const std::string& label) {
  auto to_int = [&](const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw std::invalid_argument("bad unit label '" + label + "'");
    }
    return std::stoi(s);
  };
  if (label.size() >= 2 && label[0] == 'S') return solo(to_int(label.substr(1)));
  if (label.size() >= 4 && label[0] == 'P') {
    const auto dash = label.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("bad unit label '" + label + "'");
    return pair(to_int(label.substr(1, dash - 1)), to_int(label.substr(dash + 1)));
  }
  throw std::invalid_argument("bad unit label '" + label + "'");
}

std::vector<AssignableUnit> enumerate_units(int n_sufficient, int n_limited) {
  std::vector<AssignableUnit> units;
  for (int i = 0; i < n_sufficient; ++i) units.push_back(AssignableUnit::solo(i));
  for (int a = 0; a < n_limited; ++a) {
    for (int b = a + 1; b < n_limited; ++b) {
      units.push_back(AssignableUnit::pair(n_sufficient + a, n_sufficient + b));
    }
  }
  return units;
}

// ---------------------------------------------------------------- target sets

TargetSet TargetSet::all(int n_targets) {
  if (n_targets < 0 || n_targets > 64) throw std::invalid_argument("n_targets out of range");
  return TargetSet(n_targets == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_targets) - 1);
}

TargetSet TargetSet::of(std::initializer_list<int> targets) {
  TargetSet s;
  for (const int t : targets) s = s.with(t);
  return s;
}

std::vector<int> TargetSet::members() const {
  std::vector<int> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

// ---------------------------------------------------------------- matroid

AssignmentGraph AssignmentGraph::complete(std::vector<AssignableUnit> units, int n_targets) {
  AssignmentGraph g;
  g.n_targets = n_targets;
  g.edges.assign(units.size(), std::vector<bool>(static_cast<std::size_t>(n_targets), true));
  g.units = std::move(units);
  return g;
}

AssignmentGraph AssignmentGraph::complete(int n_sufficient, int n_limited, int n_targets) {
  return complete(enumerate_units(n_sufficient, n_limited), n_targets);
}

namespace {

// Max number of targets in `order[k..]` coverable with units whose robots
// avoid `used`. A unit can only be matched once because its robots become
// used, so this is matching with robot conflicts folded in.
class CoverSearch {
 public:
  CoverSearch(const AssignmentGraph& g, std::vector<int> order) : g_(g), order_(std::move(order)) {
    for (const int t : order_) {
      if (t < 0 || t >= g.n_targets) throw std::out_of_range("target index outside graph");
    }
  }

  int best(std::size_t k, std::uint64_t used) {
    if (k == order_.size()) return 0;
    const std::uint64_t key = (used << 6) | k;  // k < 64
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;

    const int remaining = static_cast<int>(order_.size() - k);
    int result = best(k + 1, used);
    const int t = order_[k];
    for (std::size_t u = 0; u < g_.units.size() && result < remaining; ++u) {
      if (!g_.edges[u][static_cast<std::size_t>(t)]) continue;
      const std::uint64_t mask = g_.units[u].robot_mask();
      if (used & mask) continue;
      result = std::max(result, 1 + best(k + 1, used | mask));
    }
    memo_.emplace(key, result);
    return result;
  }

 private:
  const AssignmentGraph& g_;
  std::vector<int> order_;
  std::unordered_map<std::uint64_t, int> memo_;
};

int max_cover(const AssignmentGraph& g, TargetSet s) {
  if (g.units.size() > 0) {
    std::uint64_t all_robots = 0;
    for (const auto& u : g.units) all_robots |= u.robot_mask();
    // The memo key packs the robot mask above 6 bits.
    if (std::bit_width(all_robots) > 58) throw std::invalid_argument("too many robots for rank");
  }
  CoverSearch search(g, s.members());
  return search.best(0, 0);
}

}  // namespace

int rank(const AssignmentGraph& graph, TargetSet s) { return max_cover(graph, s); }

bool is_independent(const AssignmentGraph& graph, TargetSet s) {
  return max_cover(graph, s) == s.size();
}

TargetSet span(const AssignmentGraph& graph, TargetSet s) {
  const int r = rank(graph, s);
  TargetSet out;
  for (int j = 0; j < graph.n_targets; ++j) {
    if (s.contains(j) || rank(graph, s.with(j)) == r) out = out.with(j);
  }
  return out;
}

// ---------------------------------------------------------------- quality table

QualityTable::QualityTable(std::vector<AssignableUnit> units, int n_targets, double fill)
    : units_(std::move(units)), n_targets_(n_targets) {
  if (n_targets < 0 || n_targets > 64) throw std::invalid_argument("n_targets out of range");
  values_.assign(units_.size() * static_cast<std::size_t>(n_targets), fill);
}

void QualityTable::set(std::size_t unit, int target, double q) {
  if (std::isnan(q) || q == std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("quality must be finite or -inf");
  }
  if (unit >= units_.size() || target < 0 || target >= n_targets_) {
    throw std::out_of_range("quality table index");
  }
  values_[unit * static_cast<std::size_t>(n_targets_) + static_cast<std::size_t>(target)] = q;
}

std::size_t QualityTable::index_of(const AssignableUnit& unit) const {
  const auto it = std::find(units_.begin(), units_.end(), unit);
  if (it == units_.end()) throw std::out_of_range("unit " + unit.label() + " not in table");
  return static_cast<std::size_t>(it - units_.begin());
}

double QualityTable::min_finite() const {
  double m = std::numeric_limits<double>::infinity();
  for (const double v : values_) {
    if (std::isfinite(v)) m = std::min(m, v);
  }
  return std::isfinite(m) ? m : 0.0;
}

QualityTable QualityTable::shifted_nonnegative() const {
  QualityTable out = *this;
  const double shift = min_finite();
  for (double& v : out.values_) {
    if (std::isfinite(v)) v = std::max(0.0, v - shift);
  }
  return out;
}

void write_quality_csv(std::ostream& out, const QualityTable& table) {
  const auto old_precision = out.precision(17);
  out << "unit_id,target_id,q\n";
  for (std::size_t u = 0; u < table.n_units(); ++u) {
    for (int t = 0; t < table.n_targets(); ++t) {
      out << table.units()[u].label() << ',' << t << ',';
      const double q = table.at(u, t);
      if (q == kNegInf) out << "-inf";
      else out << q;
      out << '\n';
    }
  }
  out.precision(old_precision);
}

QualityTable read_quality_csv(std::istream& in) {
  struct Row {
    AssignableUnit unit;
    int target;
    double q;
  };
  std::vector<Row> rows;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "unit_id,target_id,q") {
        throw std::runtime_error("quality csv: expected header 'unit_id,target_id,q'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string unit_s, target_s, q_s;
    if (!std::getline(ls, unit_s, ',') || !std::getline(ls, target_s, ',') ||
        !std::getline(ls, q_s)) {
      throw std::runtime_error("quality csv line " + std::to_string(line_no) + ": expected 3 fields");
    }
    try {
      const double q = (q_s == "-inf") ? kNegInf : std::stod(q_s);
      rows.push_back({AssignableUnit::parse(unit_s), std::stoi(target_s), q});
    } catch (const std::exception& e) {
      throw std::runtime_error("quality csv line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  std::vector<AssignableUnit> units;
  int n_targets = 0;
  for (const Row& r : rows) {
    if (r.target < 0) throw std::runtime_error("quality csv: negative target id");
    units.push_back(r.unit);
    n_targets = std::max(n_targets, r.target + 1);
  }
  std::sort(units.begin(), units.end());
  units.erase(std::unique(units.begin(), units.end()), units.end());
  for (std::size_t a = 0; a < units.size(); ++a) {
    for (std::size_t b = a + 1; b < units.size(); ++b) {
      // A robot cannot be both a solo (sufficient) and a pair member (limited).
      if (units[a].kind() != units[b].kind() && units[a].shares_robot(units[b])) {
        throw std::runtime_error("quality csv: robot used as both sufficient and limited");
      }
    }
  }

  QualityTable table(units, n_targets, kNegInf);
  std::vector<bool> seen(units.size() * static_cast<std::size_t>(n_targets), false);
  for (const Row& r : rows) {
    const std::size_t u = table.index_of(r.unit);
    const std::size_t slot = u * static_cast<std::size_t>(n_targets) + static_cast<std::size_t>(r.target);
    if (seen[slot]) throw std::runtime_error("quality csv: duplicate entry for " + r.unit.label());
    seen[slot] = true;
    table.set(u, r.target, r.q);
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
    throw std::runtime_error("quality csv: table is missing unit x target entries");
  }
  return table;
}

// ---------------------------------------------------------------- assignments

void validate_assignment(const Assignment& assignment) {
  std::uint64_t used = 0;
  for (const auto& [target, unit] : assignment) {
    if (used & unit.robot_mask()) {
      throw InvariantViolation("robot reused by unit " + unit.label() + " at target " +
                               std::to_string(target));
    }
    used |= unit.robot_mask();
  }
}

double assignment_total(const Assignment& assignment, const QualityTable& table) {
  double total = 0.0;
  for (const auto& [target, unit] : assignment) total += table.at(table.index_of(unit), target);
  return total;
}

AssignResult greedy_assign(const QualityTable& quality, TargetSet targets) {
  if (!targets.is_subset_of(TargetSet::all(quality.n_targets()))) {
    throw std::out_of_range("greedy_assign: target outside table");
  }
  AssignResult result;
  std::uint64_t used_robots = 0;
  TargetSet remaining = targets;

  while (!remaining.empty()) {
    double best = kNegInf;
    std::size_t best_unit = 0;
    int best_target = -1;
    bool any_feasible = false;
    const std::vector<int> open = remaining.members();

    for (std::size_t u = 0; u < quality.n_units(); ++u) {
      if (quality.units()[u].robot_mask() & used_robots) continue;
      any_feasible = true;
      for (const int t : open) {
        const double q = quality.at(u, t);
        ++result.evaluations;
        if (q > best) {
          best = q;
          best_unit = u;
          best_target = t;
        }
      }
    }
    if (!any_feasible || best_target < 0) break;

    const AssignableUnit& unit = quality.units()[best_unit];
    result.assignment.emplace(best_target, unit);
    result.total += best;
    used_robots |= unit.robot_mask();
    remaining = remaining.without(best_target);
    ++result.rounds;
    validate_assignment(result.assignment);
  }
  return result;
}

AssignResult greedy_assign(const QualityTable& quality) {
  return greedy_assign(quality, TargetSet::all(quality.n_targets()));
}

namespace {

class ExhaustiveSearch {
 public:
  explicit ExhaustiveSearch(const QualityTable& q) : q_(q) {}

  AssignResult run() {
    best_total_ = 0.0;  // the empty assignment
    visit(0, 0, 0.0);
    AssignResult r;
    r.assignment = best_;
    r.total = best_total_;
    r.evaluations = evaluations_;
    return r;
  }

 private:
  void visit(int target, std::uint64_t used, double total) {
    if (target == q_.n_targets()) {
      if (total > best_total_) {
        best_total_ = total;
        best_ = current_;
      }
      return;
    }
    for (std::size_t u = 0; u < q_.n_units(); ++u) {
      const AssignableUnit& unit = q_.units()[u];
      if (unit.robot_mask() & used) continue;
      const double v = q_.at(u, target);
      ++evaluations_;
      if (v == kNegInf) continue;
      current_.emplace(target, unit);
      visit(target + 1, used | unit.robot_mask(), total + v);
      current_.erase(target);
    }
    visit(target + 1, used, total);
  }

  const QualityTable& q_;
  Assignment current_;
  Assignment best_;
  double best_total_ = 0.0;
  std::size_t evaluations_ = 0;
};

}  // namespace

AssignResult optimal_assign(const QualityTable& quality) {
  if (quality.n_targets() > kOptimalMaxTargets || quality.n_units() > kOptimalMaxUnits) {
    throw InstanceTooLarge("optimal_assign supports at most " + std::to_string(kOptimalMaxTargets) +
                           " targets and " + std::to_string(kOptimalMaxUnits) + " units, got " +
                           std::to_string(quality.n_targets()) + " and " +
                           std::to_string(quality.n_units()));
  }
  AssignResult r = ExhaustiveSearch(quality).run();
  validate_assignment(r.assignment);
  return r;
}

bool verify_bound(double greedy_total, double optimal_total, BoundMode mode) {
  const double factor = mode == BoundMode::Arbitrary ? 1.0 / 3.0 : 0.5;
  const double tol = 1e-9 * std::abs(optimal_total);
  return greedy_total >= factor * optimal_total - tol;
}

QualityTable random_quality_table(BoundMode mode, int n_sufficient, int n_limited, int n_targets,
                                  NoiseSource& rng) {
  QualityTable table(enumerate_units(n_sufficient, n_limited), n_targets);
  for (std::size_t u = 0; u < table.n_units(); ++u) {
    for (int t = 0; t < n_targets; ++t) {
      double q = rng.uniform(0.0, 1.0);
      if (mode == BoundMode::Arbitrary) {
        const double pick = rng.uniform(0.0, 1.0);
        if (pick < 0.25) q = 0.0;
        else if (pick < 0.45) q = std::exp(rng.uniform(0.0, 4.0));  // heavy tail
        else if (pick < 0.65) q = 1.0 - 1e-3 * rng.uniform(0.0, 1.0);  // near ties
      }
      table.set(u, t, q);
    }
  }
  return table;
}

}  // namespace hetsense
