#pragma once

#include <array>
#include <limits>
#include <vector>

#include "hetsense/scenario.hpp"

namespace hetsense {

using Row2 = std::array<double, 2>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Gram determinants at or below this are treated as unobservable.
inline constexpr double kDetFloor = 1e-12;

enum class RowLabel { RangeJac, BearingJac, LieRange, LieBearing };

/// Stacked gradients w.r.t. the planar target position; always two columns.
struct ObservabilityMatrix {
  std::vector<Row2> rows;
  std::vector<RowLabel> row_labels;

  void append(Row2 row, RowLabel label) {
    rows.push_back(row);
    row_labels.push_back(label);
  }
};

// Gradients w.r.t. target position (y1, y2). Row operations that divide by
// the squared separation throw CoincidentPositions when it is zero.

/// [(y1 - x1), (y2 - x2)]; gradient of the half-squared range.
Row2 range_jacobian(const RobotState& robot, const TargetState& target);

/// [-(y2 - x2), (y1 - x1)] / |y - x|^2.
Row2 bearing_jacobian(const RobotState& robot, const TargetState& target);

/// Gradient of L_g h_r = [-d phi sin(phi t), d phi cos(phi t)].
Row2 lie_range_row(const RobotState& robot, const TargetState& target);

/// Gradient [a, b] of L_g h_b by the quotient rule.
Row2 lie_bearing_row(const RobotState& robot, const TargetState& target);

/// Lie derivatives themselves (used by finite-difference checks).
double lie_range_value(const RobotState& robot, const TargetState& target);
double lie_bearing_value(const RobotState& robot, const TargetState& target);

/// Rows: range Jacobian, bearing Jacobian, Lie range row, Lie bearing row.
ObservabilityMatrix build_single_robot_matrix(const RobotState& robot, const TargetState& target);

/// Rows: the two robots' Jacobians, then [d cos(phi t), d sin(phi t)].
/// Range-only robots contribute range Jacobians; `modality` selects
/// bearing Jacobians for bearing-only pairs.
ObservabilityMatrix build_pair_matrix(const RobotState& robot1, const RobotState& robot2,
                                      const TargetState& target,
                                      LimitedSensorKind modality = LimitedSensorKind::RangeOnly);

/// Third row of the pair matrix.
Row2 pair_motion_row(const TargetState& target);

/// 2x2 Gram matrix O^T O as {g11, g12, g22}.
std::array<double, 3> gram(const ObservabilityMatrix& o);

/// log det(O^T O), or kNegInf when the determinant is <= kDetFloor or not finite.
double tracking_quality(const ObservabilityMatrix& o);

/// Same floor/log rule applied to a precomputed determinant.
double quality_from_det(double det);

}  // namespace hetsense
