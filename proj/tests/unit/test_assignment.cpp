#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hetsense/assignment.hpp"
#include "hetsense/errors.hpp"
#include "hetsense/observability.hpp"
#include "support/oracles.hpp"

using namespace hetsense;

namespace {

std::size_t choose2(int n) { return static_cast<std::size_t>(n * (n - 1) / 2); }

QualityTable table_from(int n1, int n2, int m, std::initializer_list<std::tuple<const char*, int, double>> entries,
                        double fill = 0.0) {
  QualityTable q(enumerate_units(n1, n2), m, fill);
  for (const auto& [label, t, v] : entries) q.set(q.index_of(AssignableUnit::parse(label)), t, v);
  return q;
}

}  // namespace

TEST_CASE("units") {
  CHECK(enumerate_units(2, 3).size() == 5);
  CHECK(enumerate_units(0, 2).size() == 1);
  CHECK(enumerate_units(3, 0).size() == 3);
  const auto u = enumerate_units(2, 3);
  CHECK(u[0] == AssignableUnit::solo(0));
  CHECK(u[1] == AssignableUnit::solo(1));
  CHECK(u[2] == AssignableUnit::pair(2, 3));
  CHECK(u[3] == AssignableUnit::pair(2, 4));
  CHECK(u[4] == AssignableUnit::pair(3, 4));
  CHECK(std::is_sorted(u.begin(), u.end()));

  CHECK(AssignableUnit::pair(4, 2) == AssignableUnit::pair(2, 4));
  CHECK(AssignableUnit::pair(4, 2).first() == 2);
  CHECK_THROWS_AS(AssignableUnit::pair(3, 3), std::invalid_argument);
  CHECK(AssignableUnit::parse("P2-4") == AssignableUnit::pair(2, 4));
  CHECK(AssignableUnit::parse("S7").label() == "S7");
  CHECK_THROWS_AS(AssignableUnit::parse("Q1"), std::invalid_argument);
  CHECK_THROWS_AS(AssignableUnit::parse("P1"), std::invalid_argument);
  CHECK(AssignableUnit::pair(2, 3).shares_robot(AssignableUnit::pair(3, 4)));
  CHECK_FALSE(AssignableUnit::pair(2, 3).shares_robot(AssignableUnit::solo(1)));
}

TEST_CASE("independence examples") {
  CHECK(is_independent(AssignmentGraph::complete(2, 3, 3), TargetSet{}));
  CHECK(is_independent(AssignmentGraph::complete(1, 2, 2), TargetSet::of({0, 1})));
  CHECK_FALSE(is_independent(AssignmentGraph::complete(0, 3, 2), TargetSet::of({0, 1})));
  CHECK(is_independent(AssignmentGraph::complete(0, 4, 2), TargetSet::of({0, 1})));

  SUBCASE("matches brute-force enumeration") {
    for (int n1 = 0; n1 <= 2; ++n1) {
      for (int n2 = 0; n2 <= 4; ++n2) {
        const auto g = AssignmentGraph::complete(n1, n2, 4);
        for (std::uint64_t bits = 0; bits < 16; ++bits) {
          const TargetSet s(bits);
          const int r = oracle::brute_rank(g.units, s);
          CHECK(rank(g, s) == r);
          CHECK(is_independent(g, s) == (r == s.size()));
        }
      }
    }
  }
}

TEST_CASE("rank and span") {
  const auto g = AssignmentGraph::complete(2, 3, 3);
  CHECK(rank(g, TargetSet{}) == 0);
  CHECK(rank(g, TargetSet::all(3)) == 3);
  const auto g5 = AssignmentGraph::complete(2, 3, 5);
  CHECK(rank(g5, TargetSet::all(5)) == 3);  // capacity 2 + floor(3/2)
  for (std::uint64_t bits = 0; bits < 32; ++bits) CHECK(rank(g5, TargetSet(bits)) <= TargetSet(bits).size());

  CHECK(span(g5, TargetSet{}) == TargetSet{});
  // Saturated: three targets already use all capacity, so everything is spanned.
  CHECK(span(g5, TargetSet::of({0, 2, 4})) == TargetSet::all(5));
  CHECK(span(g5, TargetSet::of({1})) == TargetSet::of({1}));
  for (std::uint64_t bits = 0; bits < 32; ++bits) CHECK(TargetSet(bits).is_subset_of(span(g5, TargetSet(bits))));

  SUBCASE("sparse edges") {
    AssignmentGraph sparse = AssignmentGraph::complete(1, 0, 2);
    sparse.edges[0][1] = false;
    CHECK(rank(sparse, TargetSet::of({1})) == 0);
    CHECK(span(sparse, TargetSet{}) == TargetSet::of({1}));
  }
}

TEST_CASE("matroid axioms on small instances") {
  for (int n1 = 0; n1 <= 2; ++n1) {
    for (int n2 = 0; n2 <= 4; ++n2) {
      for (int m = 1; m <= 4; ++m) {
        const auto g = AssignmentGraph::complete(n1, n2, m);
        const std::uint64_t n_sets = std::uint64_t{1} << m;
        std::vector<bool> indep(n_sets);
        for (std::uint64_t s = 0; s < n_sets; ++s) indep[s] = is_independent(g, TargetSet(s));
        REQUIRE(indep[0]);
        for (std::uint64_t a = 0; a < n_sets; ++a) {
          if (!indep[a]) continue;
          for (std::uint64_t b = 0; b < n_sets; ++b) {
            if ((b & ~a) == 0) CHECK(indep[b]);  // hereditary
            if (indep[b] && std::popcount(a) < std::popcount(b)) {
              bool exchange = false;
              for (std::uint64_t d = b & ~a; d; d &= d - 1) exchange = exchange || indep[a | (d & -d)];
              CHECK(exchange);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("greedy examples") {
  SUBCASE("single target single solo") {
    const QualityTable q = table_from(1, 0, 1, {{"S0", 0, 5.0}});
    const AssignResult r = greedy_assign(q);
    CHECK(r.total == 5.0);
    CHECK(r.assignment.at(0) == AssignableUnit::solo(0));
  }
  SUBCASE("two solos, two targets") {
    const QualityTable q = table_from(2, 0, 2, {{"S0", 0, 3}, {"S0", 1, 2}, {"S1", 0, 2.9}, {"S1", 1, 2.9}});
    const AssignResult r = greedy_assign(q);
    CHECK(r.assignment.at(0) == AssignableUnit::solo(0));
    CHECK(r.assignment.at(1) == AssignableUnit::solo(1));
    CHECK(r.total == doctest::Approx(5.9));
    CHECK(optimal_assign(q).total == doctest::Approx(5.9));
    CHECK(oracle::brute_optimum(q) == doctest::Approx(5.9));
  }
  SUBCASE("half of the optimum") {
    const double eps = 0.01;
    const QualityTable q = table_from(1, 2, 2, {{"S0", 0, 1.0}, {"S0", 1, 1 - eps}, {"P1-2", 0, 1 - eps}, {"P1-2", 1, 0.0}});
    const double g = greedy_assign(q).total;
    const double o = optimal_assign(q).total;
    CHECK(g == doctest::Approx(1.0));
    CHECK(o == doctest::Approx(2 - 2 * eps));
    CHECK(verify_bound(g, o, BoundMode::Submodular));
    CHECK(g < 0.51 * o);
  }
  SUBCASE("a third of the optimum once pairs can be disjoint") {
    const double eps = 0.01;
    const QualityTable q =
        table_from(1, 4, 3, {{"P2-3", 0, 1.0}, {"S0", 0, 1 - eps}, {"P1-2", 1, 1 - eps}, {"P3-4", 2, 1 - eps}});
    const double g = greedy_assign(q).total;
    const double o = optimal_assign(q).total;
    CHECK(g == doctest::Approx(1.0));
    CHECK(o == doctest::Approx(3 - 3 * eps));
    CHECK(verify_bound(g, o, BoundMode::Arbitrary));
    CHECK_FALSE(verify_bound(g, o, BoundMode::Submodular));
  }
  SUBCASE("pair removal invalidates every pair sharing a robot") {
    const QualityTable q = table_from(0, 3, 2, {{"P0-1", 0, 9}, {"P0-2", 1, 8}, {"P1-2", 1, 7}});
    const AssignResult r = greedy_assign(q);
    CHECK(r.assignment.size() == 1);
    CHECK(r.total == 9);
  }
  SUBCASE("ties break by unit order then target index") {
    const QualityTable q(enumerate_units(2, 2), 2, 1.0);
    const AssignResult r = greedy_assign(q);
    CHECK(r.assignment.at(0) == AssignableUnit::solo(0));
    CHECK(r.assignment.at(1) == AssignableUnit::solo(1));
  }
  SUBCASE("stops on all-sentinel qualities") {
    QualityTable q(enumerate_units(2, 0), 2, kNegInf);
    q.set(1, 1, -3.0);
    const AssignResult r = greedy_assign(q);
    CHECK(r.assignment.size() == 1);
    CHECK(r.assignment.at(1) == AssignableUnit::solo(1));
    CHECK(r.total == -3.0);
  }
  SUBCASE("target subset") {
    const QualityTable q(enumerate_units(2, 0), 3, 1.0);
    const AssignResult r = greedy_assign(q, TargetSet::of({2}));
    CHECK(r.assignment.size() == 1);
    CHECK(r.assignment.count(2) == 1);
  }
}

TEST_CASE("greedy evaluation count respects (N1 + C(N2,2)) M^2") {
  NoiseSource rng(31, 0);
  for (int n1 = 0; n1 <= 4; ++n1) {
    for (int n2 = 0; n2 <= 6; ++n2) {
      for (int m = 1; m <= 5; ++m) {
        const QualityTable q = random_quality_table(BoundMode::Arbitrary, n1, n2, m, rng);
        const AssignResult r = greedy_assign(q);
        CHECK(r.evaluations <= (static_cast<std::size_t>(n1) + choose2(n2)) * static_cast<std::size_t>(m * m));
        CHECK(r.rounds <= static_cast<std::size_t>(m));
      }
    }
  }
}

TEST_CASE("optimal_assign agrees with brute force and dominates greedy") {
  NoiseSource rng(32, 0);
  for (int i = 0; i < 150; ++i) {
    const int n1 = static_cast<int>(rng.uniform(0, 3));
    const int n2 = static_cast<int>(rng.uniform(0, 5));
    const int m = 1 + static_cast<int>(rng.uniform(0, 3));
    QualityTable q = random_quality_table(i % 2 ? BoundMode::Arbitrary : BoundMode::Submodular, n1, n2, m, rng);
    if (i % 5 == 0 && q.n_units() > 0) q.set(0, 0, kNegInf);
    const AssignResult o = optimal_assign(q);
    const AssignResult g = greedy_assign(q);
    CHECK(o.total == doctest::Approx(oracle::brute_optimum(q)).epsilon(1e-12));
    CHECK(o.total >= g.total - 1e-12);
    CHECK(assignment_total(o.assignment, q) == doctest::Approx(o.total));
    CHECK_NOTHROW(validate_assignment(o.assignment));
    CHECK(verify_bound(g.total, o.total, BoundMode::Arbitrary));
  }
}

TEST_CASE("optimal single target is the column max") {
  NoiseSource rng(33, 0);
  const QualityTable q = random_quality_table(BoundMode::Submodular, 2, 3, 1, rng);
  double best = 0.0;
  for (std::size_t u = 0; u < q.n_units(); ++u) best = std::max(best, q.at(u, 0));
  CHECK(optimal_assign(q).total == best);
}

TEST_CASE("optimal_assign size guard") {
  CHECK_THROWS_AS(optimal_assign(QualityTable(enumerate_units(2, 3), 7)), InstanceTooLarge);
  CHECK_THROWS_AS(optimal_assign(QualityTable(enumerate_units(0, 6), 2)), InstanceTooLarge);
  CHECK_NOTHROW(optimal_assign(QualityTable(enumerate_units(2, 5), 6)));
}

TEST_CASE("verify_bound") {
  CHECK(verify_bound(5.9, 5.9, BoundMode::Arbitrary));
  CHECK(verify_bound(5.9, 5.9, BoundMode::Submodular));
  CHECK(verify_bound(0.4, 1.0, BoundMode::Arbitrary));
  CHECK_FALSE(verify_bound(0.4, 1.0, BoundMode::Submodular));
  CHECK(verify_bound(0.0, 0.0, BoundMode::Submodular));
}

TEST_CASE("validate_assignment rejects robot reuse") {
  Assignment a{{0, AssignableUnit::pair(2, 3)}, {1, AssignableUnit::pair(3, 4)}};
  CHECK_THROWS_AS(validate_assignment(a), InvariantViolation);
  Assignment ok{{0, AssignableUnit::pair(2, 3)}, {1, AssignableUnit::solo(0)}};
  CHECK_NOTHROW(validate_assignment(ok));
}

TEST_CASE("shifted table is nonnegative and keeps the greedy picks") {
  NoiseSource rng(34, 0);
  for (int i = 0; i < 50; ++i) {
    QualityTable q(enumerate_units(2, 3), 3);
    for (std::size_t u = 0; u < q.n_units(); ++u)
      for (int t = 0; t < 3; ++t) q.set(u, t, rng.uniform(-5, 3));
    q.set(1, 2, kNegInf);
    const QualityTable s = q.shifted_nonnegative();
    CHECK(s.at(1, 2) == kNegInf);
    CHECK(s.min_finite() == 0.0);
    CHECK(greedy_assign(s).assignment == greedy_assign(q).assignment);
  }
}

TEST_CASE("quality csv round trip") {
  NoiseSource rng(35, 0);
  for (int i = 0; i < 20; ++i) {
    QualityTable q = random_quality_table(BoundMode::Arbitrary, 2, 4, 3, rng);
    q.set(3, 1, kNegInf);
    std::stringstream ss;
    write_quality_csv(ss, q);
    const QualityTable back = read_quality_csv(ss);
    REQUIRE(back.units() == q.units());
    REQUIRE(back.n_targets() == q.n_targets());
    for (std::size_t u = 0; u < q.n_units(); ++u)
      for (int t = 0; t < q.n_targets(); ++t) CHECK(back.at(u, t) == q.at(u, t));
  }
}

TEST_CASE("quality csv errors") {
  std::istringstream missing("unit_id,target_id,q\nS0,0,1\nS0,1,1\nS1,0,1\n");
  CHECK_THROWS(read_quality_csv(missing));
  std::istringstream dup("unit_id,target_id,q\nS0,0,1\nS0,0,2\n");
  CHECK_THROWS(read_quality_csv(dup));
  std::istringstream header("unit,target,q\nS0,0,1\n");
  CHECK_THROWS(read_quality_csv(header));
  std::istringstream mixed("unit_id,target_id,q\nS1,0,1\nP1-2,0,1\n");
  CHECK_THROWS(read_quality_csv(mixed));
  std::istringstream ok("unit_id,target_id,q\nP2-1,0,-inf\nS0,0,0.5\n");
  const QualityTable q = read_quality_csv(ok);
  CHECK(q.units()[0] == AssignableUnit::solo(0));
  CHECK(q.at(1, 0) == kNegInf);
}
