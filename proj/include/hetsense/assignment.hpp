#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hetsense/scenario.hpp"

namespace hetsense {

/// One sufficient robot, or an unordered pair of distinct limited robots.
/// Indices are global robot indices (sufficient robots first).
class AssignableUnit {
 public:
  enum class Kind { Solo, Pair };

  static AssignableUnit solo(int robot);
  /// Stores the pair in ascending order; throws std::invalid_argument if a == b.
  static AssignableUnit pair(int a, int b);

  Kind kind() const { return kind_; }
  int first() const { return first_; }
  /// -1 for solo units.
  int second() const { return second_; }
  bool is_pair() const { return kind_ == Kind::Pair; }

  /// Bitmask of robots the unit consumes.
  std::uint64_t robot_mask() const;
  bool shares_robot(const AssignableUnit& other) const {
    return (robot_mask() & other.robot_mask()) != 0;
  }

  /// "S<i>" for solos, "P<i>-<j>" for pairs.
  std::string label() const;
  /// Inverse of label(); throws std::invalid_argument.
  static AssignableUnit parse(const std::string& label);

  friend bool operator==(const AssignableUnit&, const AssignableUnit&) = default;
  /// Canonical order: solos ascending, then pairs lexicographic.
  friend auto operator<=>(const AssignableUnit&, const AssignableUnit&) = default;

 private:
  AssignableUnit(Kind kind, int first, int second) : kind_(kind), first_(first), second_(second) {}
  Kind kind_;
  int first_;
  int second_;
};

/// N1 solo units followed by the C(N2, 2) limited pairs, canonical order.
std::vector<AssignableUnit> enumerate_units(int n_sufficient, int n_limited);

/// Subset of target indices [0, 64).
class TargetSet {
 public:
  constexpr TargetSet() = default;
  constexpr explicit TargetSet(std::uint64_t bits) : bits_(bits) {}
  static TargetSet all(int n_targets);
  static TargetSet of(std::initializer_list<int> targets);

  constexpr bool contains(int t) const { return (bits_ >> t) & 1u; }
  constexpr TargetSet with(int t) const { return TargetSet(bits_ | (std::uint64_t{1} << t)); }
  constexpr TargetSet without(int t) const { return TargetSet(bits_ & ~(std::uint64_t{1} << t)); }
  int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool is_subset_of(TargetSet o) const { return (bits_ & ~o.bits_) == 0; }
  std::vector<int> members() const;

  friend constexpr bool operator==(TargetSet, TargetSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Bipartite graph G = (U, V, E) of units and targets.
struct AssignmentGraph {
  std::vector<AssignableUnit> units;
  int n_targets = 0;
  /// edges[u][t]: unit u may track target t.
  std::vector<std::vector<bool>> edges;

  static AssignmentGraph complete(std::vector<AssignableUnit> units, int n_targets);
  static AssignmentGraph complete(int n_sufficient, int n_limited, int n_targets);
};

/// Whether some robot-disjoint choice of units covers every target in `s`.
bool is_independent(const AssignmentGraph& graph, TargetSet s);

/// Largest number of targets of `s` coverable by robot-disjoint units.
int rank(const AssignmentGraph& graph, TargetSet s);

/// { j : rank(s + j) == rank(s) }.
TargetSet span(const AssignmentGraph& graph, TargetSet s);

/// Quality q(unit, target), dense over units x targets. Entries are finite
/// or kNegInf (unassignable).
class QualityTable {
 public:
  QualityTable(std::vector<AssignableUnit> units, int n_targets, double fill = 0.0);

  const std::vector<AssignableUnit>& units() const { return units_; }
  std::size_t n_units() const { return units_.size(); }
  int n_targets() const { return n_targets_; }

  double at(std::size_t unit, int target) const {
    return values_[unit * static_cast<std::size_t>(n_targets_) + static_cast<std::size_t>(target)];
  }
  /// Throws std::invalid_argument on NaN or +inf.
  void set(std::size_t unit, int target, double q);

  /// Index of `unit` in units(); throws std::out_of_range if absent.
  std::size_t index_of(const AssignableUnit& unit) const;

  /// Smallest finite entry, or 0 if there is none.
  double min_finite() const;

  /// Every finite entry minus min_finite(); kNegInf entries stay kNegInf.
  QualityTable shifted_nonnegative() const;

 private:
  std::vector<AssignableUnit> units_;
  int n_targets_;
  std::vector<double> values_;
};

/// `unit_id,target_id,q` with a header row; "-inf" marks the sentinel.
void write_quality_csv(std::ostream& out, const QualityTable& table);
/// Units are collected from the rows and put in canonical order; every
/// unit x target pair must appear exactly once. Throws std::runtime_error.
QualityTable read_quality_csv(std::istream& in);

/// Target index -> unit. Robot-disjoint by construction of the algorithms;
/// validate_assignment() checks it.
using Assignment = std::map<int, AssignableUnit>;

/// Throws InvariantViolation if a robot appears in more than one unit.
void validate_assignment(const Assignment& assignment);

/// Sum of table entries for the assigned pairs.
double assignment_total(const Assignment& assignment, const QualityTable& table);

struct AssignResult {
  Assignment assignment;
  double total = 0.0;
  /// Number of quality-table reads made by the algorithm.
  std::size_t evaluations = 0;
  std::size_t rounds = 0;
};

/// Greedy assignment: each round takes the best remaining feasible
/// (unit, target) pair, then removes that target and the unit's robots.
/// Ties go to the lower unit index, then the lower target index. Stops when
/// targets or units run out or only kNegInf entries remain.
AssignResult greedy_assign(const QualityTable& quality, TargetSet targets);
AssignResult greedy_assign(const QualityTable& quality);

inline constexpr int kOptimalMaxTargets = 6;
inline constexpr std::size_t kOptimalMaxUnits = 12;

/// Exhaustive maximum over robot-disjoint partial assignments, skipping
/// kNegInf entries. Throws InstanceTooLarge beyond the size guards.
AssignResult optimal_assign(const QualityTable& quality);

enum class BoundMode { Arbitrary, Submodular };

/// greedy >= optimal / 3 (Arbitrary) or / 2 (Submodular), within 1e-9 |optimal|.
bool verify_bound(double greedy_total, double optimal_total, BoundMode mode);

/// Synthetic tables for bound experiments. Submodular mode draws
/// independent nonnegative per-(unit, target) gains; Arbitrary mode mixes
/// sparse, heavy-tailed and near-tied nonnegative entries.
QualityTable random_quality_table(BoundMode mode, int n_sufficient, int n_limited, int n_targets,
                                  NoiseSource& rng);

}  // namespace hetsense
