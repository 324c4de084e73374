#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "hetsense/kernels.hpp"
#include "hetsense/observability.hpp"

using namespace hetsense;
namespace k = hetsense::kernels;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

struct SingleInputs {
  std::vector<double> dx, dy, ux, uy;
  k::SingleRobotBatch batch() const { return {dx, dy, ux, uy}; }
};

SingleInputs random_single(std::size_t n, std::uint64_t seed) {
  NoiseSource rng(seed, 0);
  SingleInputs in;
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = std::exp(rng.uniform(-6.0, 4.0));
    in.dx.push_back(scale * rng.uniform(-1, 1));
    in.dy.push_back(scale * rng.uniform(-1, 1));
    const double phase = rng.uniform(-kPi, kPi);
    const double speed = rng.uniform(0.0, 3.0);
    in.ux.push_back(-speed * std::sin(phase));
    in.uy.push_back(speed * std::cos(phase));
  }
  return in;
}

}  // namespace

TEST_CASE("single-robot kernel matches the row-by-row matrix") {
  NoiseSource rng(21, 0);
  for (int i = 0; i < 200; ++i) {
    const RobotState r{{rng.uniform(-10, 10), rng.uniform(-10, 10)}, 0.0, RobotKind::Sufficient};
    const TargetState t{{rng.uniform(-10, 10), rng.uniform(-10, 10)}, 20.0, 0.1, rng.uniform(0, 63)};
    const Vec2 u = t.drift();
    const double dx = t.position.x - r.position.x, dy = t.position.y - r.position.y;
    double det = 0.0;
    k::single_robot_gram_det(k::Isa::Scalar, {{&dx, 1}, {&dy, 1}, {&u.x, 1}, {&u.y, 1}}, {&det, 1});
    const double q_matrix = tracking_quality(build_single_robot_matrix(r, t));
    CHECK(quality_from_det(det) == doctest::Approx(q_matrix).epsilon(1e-10));
  }
}

TEST_CASE("pair kernel matches the row-by-row matrix") {
  NoiseSource rng(22, 0);
  for (int i = 0; i < 200; ++i) {
    const RobotState a{{rng.uniform(-10, 10), rng.uniform(-10, 10)}, 0.0, RobotKind::Limited};
    const RobotState b{{rng.uniform(-10, 10), rng.uniform(-10, 10)}, 0.0, RobotKind::Limited};
    const TargetState t{{rng.uniform(-10, 10), rng.uniform(-10, 10)}, 20.0, 0.1, rng.uniform(0, 63)};
    const ObservabilityMatrix o = build_pair_matrix(a, b, t);
    double det = 0.0;
    const auto& r = o.rows;
    k::three_row_gram_det(k::Isa::Scalar,
                          {{&r[0][0], 1}, {&r[0][1], 1}, {&r[1][0], 1}, {&r[1][1], 1}, {&r[2][0], 1}, {&r[2][1], 1}},
                          {&det, 1});
    CHECK(quality_from_det(det) == doctest::Approx(tracking_quality(o)).epsilon(1e-10));
  }
}

TEST_CASE("dispatch selects an available ISA") {
  CHECK(k::isa_available(k::Isa::Scalar));
  CHECK(k::isa_available(k::active_isa()));
  const k::Isa before = k::active_isa();
  k::set_active_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  k::set_active_isa(before);
  if (!k::isa_available(k::Isa::Avx2)) {
    CHECK_THROWS_AS(k::set_active_isa(k::Isa::Avx2), std::invalid_argument);
  }
  CHECK(k::isa_name(k::Isa::Avx2) == "avx2");
}

TEST_CASE("short inputs are rejected") {
  std::vector<double> a(3), out(4);
  CHECK_THROWS_AS(k::single_robot_gram_det(k::Isa::Scalar, {a, a, a, a}, out), std::invalid_argument);
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
  if (!k::isa_available(k::Isa::Avx2)) {
    MESSAGE("AVX2 not available on this host; equivalence not exercised");
    return;
  }
  // Sizes cover the 4-lane body, the scalar tail, and empty input.
  for (const std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 13u, 257u}) {
    SingleInputs in = random_single(n, 100 + n);
    if (n > 2) {
      in.dx[1] = 0.0;  // coincident lane: inf/nan must agree too
      in.dy[1] = 0.0;
    }
    std::vector<double> s(n), v(n);
    k::single_robot_gram_det(k::Isa::Scalar, in.batch(), s);
    k::single_robot_gram_det(k::Isa::Avx2, in.batch(), v);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isnan(s[i])) CHECK(std::isnan(v[i]));
      else CHECK(bit_equal(s[i], v[i]));
    }

    NoiseSource rng(200 + n, 0);
    std::vector<std::vector<double>> rows(6, std::vector<double>(n));
    for (auto& col : rows) for (double& x : col) x = rng.uniform(-30, 30);
    const k::ThreeRowBatch tb{rows[0], rows[1], rows[2], rows[3], rows[4], rows[5]};
    k::three_row_gram_det(k::Isa::Scalar, tb, s);
    k::three_row_gram_det(k::Isa::Avx2, tb, v);
    for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(s[i], v[i]));
  }
}
