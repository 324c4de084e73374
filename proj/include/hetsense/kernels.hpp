#pragma once

#include <span>
#include <string_view>

// Batched Gram-determinant kernels behind the quality table. Each entry is
// det(O^T O) for one candidate (unit, target) observability matrix, stored
// structure-of-arrays. Every variant evaluates the same operation sequence
// without contraction, so results are bit-identical across ISAs.

namespace hetsense::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Whether this build and this CPU can run `isa`.
bool isa_available(Isa isa);

/// Widest available ISA, unless HETSENSE_ISA=scalar|avx2 overrides it.
Isa detect_isa();

/// ISA used by the dispatching entry points; defaults to detect_isa().
Isa active_isa();

/// Throws std::invalid_argument if `isa` is not available.
void set_active_isa(Isa isa);

/// Single sufficient robot: target offset (dx, dy) from the robot and the
/// target drift (ux, uy) = [-d phi sin, d phi cos]. The four rows are the
/// range Jacobian, bearing Jacobian, drift row and Lie-bearing gradient.
struct SingleRobotBatch {
  std::span<const double> dx, dy, ux, uy;
};

/// Three explicit rows per candidate (the limited-pair matrix).
struct ThreeRowBatch {
  std::span<const double> r1x, r1y, r2x, r2y, r3x, r3y;
};

void single_robot_gram_det(const SingleRobotBatch& in, std::span<double> det);
void three_row_gram_det(const ThreeRowBatch& in, std::span<double> det);

// Explicit variants, exposed for equivalence tests.
void single_robot_gram_det(Isa isa, const SingleRobotBatch& in, std::span<double> det);
void three_row_gram_det(Isa isa, const ThreeRowBatch& in, std::span<double> det);

namespace detail {
void single_robot_gram_det_scalar(const SingleRobotBatch& in, std::span<double> det);
void three_row_gram_det_scalar(const ThreeRowBatch& in, std::span<double> det);
#if defined(HETSENSE_HAVE_AVX2_KERNELS)
void single_robot_gram_det_avx2(const SingleRobotBatch& in, std::span<double> det);
void three_row_gram_det_avx2(const ThreeRowBatch& in, std::span<double> det);
#endif
}  // namespace detail

}  // namespace hetsense::kernels
