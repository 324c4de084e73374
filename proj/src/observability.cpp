#include "hetsense/observability.hpp"

#include <cmath>

#include "hetsense/errors.hpp"

namespace hetsense {

namespace {

struct Offset {
  double dx;
  double dy;
  double n2;
};

Offset offset(const RobotState& robot, const TargetState& target) {
  const double dx = target.position.x - robot.position.x;
  const double dy = target.position.y - robot.position.y;
  return {dx, dy, dx * dx + dy * dy};
}

Offset offset_nonzero(const RobotState& robot, const TargetState& target) {
  const Offset o = offset(robot, target);
  if (o.n2 == 0.0) throw CoincidentPositions("robot and target positions coincide");
  return o;
}

}  // namespace

Row2 range_jacobian(const RobotState& robot, const TargetState& target) {
  const Offset o = offset(robot, target);
  return {o.dx, o.dy};
}

Row2 bearing_jacobian(const RobotState& robot, const TargetState& target) {
  const Offset o = offset_nonzero(robot, target);
  return {-o.dy / o.n2, o.dx / o.n2};
}

Row2 lie_range_row(const RobotState&, const TargetState& target) {
  const double dphi = target.radius * target.angular_rate;
  const double phase = target.angular_rate * target.phase_time;
  return {-dphi * std::sin(phase), dphi * std::cos(phase)};
}

Row2 lie_bearing_row(const RobotState& robot, const TargetState& target) {
  const Offset o = offset_nonzero(robot, target);
  const double dphi = target.radius * target.angular_rate;
  const double phase = target.angular_rate * target.phase_time;
  const double s = std::sin(phase);
  const double c = std::cos(phase);
  const double bracket = o.dy * s + o.dx * c;
  const double n4 = o.n2 * o.n2;
  const double a = dphi * c / o.n2 - 2.0 * o.dx * dphi * bracket / n4;
  const double b = dphi * s / o.n2 - 2.0 * o.dy * dphi * bracket / n4;
  return {a, b};
}

double lie_range_value(const RobotState& robot, const TargetState& target) {
  const Offset o = offset(robot, target);
  const double dphi = target.radius * target.angular_rate;
  const double phase = target.angular_rate * target.phase_time;
  return -o.dx * dphi * std::sin(phase) + o.dy * dphi * std::cos(phase);
}

double lie_bearing_value(const RobotState& robot, const TargetState& target) {
  const Offset o = offset_nonzero(robot, target);
  const double dphi = target.radius * target.angular_rate;
  const double phase = target.angular_rate * target.phase_time;
  return (o.dy * dphi * std::sin(phase) + o.dx * dphi * std::cos(phase)) / o.n2;
}

ObservabilityMatrix build_single_robot_matrix(const RobotState& robot, const TargetState& target) {
  ObservabilityMatrix o;
  o.append(range_jacobian(robot, target), RowLabel::RangeJac);
  o.append(bearing_jacobian(robot, target), RowLabel::BearingJac);
  o.append(lie_range_row(robot, target), RowLabel::LieRange);
  o.append(lie_bearing_row(robot, target), RowLabel::LieBearing);
  return o;
}

Row2 pair_motion_row(const TargetState& target) {
  const double phase = target.angular_rate * target.phase_time;
  return {target.radius * std::cos(phase), target.radius * std::sin(phase)};
}

ObservabilityMatrix build_pair_matrix(const RobotState& robot1, const RobotState& robot2,
                                      const TargetState& target, LimitedSensorKind modality) {
  ObservabilityMatrix o;
  if (modality == LimitedSensorKind::RangeOnly) {
    o.append(range_jacobian(robot1, target), RowLabel::RangeJac);
    o.append(range_jacobian(robot2, target), RowLabel::RangeJac);
    o.append(pair_motion_row(target), RowLabel::LieRange);
  } else {
    o.append(bearing_jacobian(robot1, target), RowLabel::BearingJac);
    o.append(bearing_jacobian(robot2, target), RowLabel::BearingJac);
    o.append(pair_motion_row(target), RowLabel::LieBearing);
  }
  return o;
}

std::array<double, 3> gram(const ObservabilityMatrix& o) {
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  for (const Row2& r : o.rows) {
    g11 += r[0] * r[0];
    g12 += r[0] * r[1];
    g22 += r[1] * r[1];
  }
  return {g11, g12, g22};
}

double quality_from_det(double det) {
  if (!(det > kDetFloor) || !std::isfinite(det)) return kNegInf;
  return std::log(det);
}

double tracking_quality(const ObservabilityMatrix& o) {
  const auto [g11, g12, g22] = gram(o);
  return quality_from_det(g11 * g22 - g12 * g12);
}

}  // namespace hetsense
