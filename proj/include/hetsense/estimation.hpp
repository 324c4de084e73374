#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hetsense/scenario.hpp"
#include "hetsense/sensing.hpp"

namespace hetsense {

/// Gaussian belief over a target's planar position.
struct EkfBelief {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();

  double trace() const { return covariance.trace(); }
};

/// Offset applied to the true position when a track is initialised.
inline const Eigen::Vector2d kInitialMeanOffset{0.5, 0.5};
inline constexpr double kInitialVariance = 0.5;

/// mean = truth + (0.5, 0.5), covariance = 0.5 I.
EkfBelief initial_belief(Vec2 true_position);

/// Measurement noise variances per modality.
struct MeasurementNoise {
  double range_variance = 0.04;
  double bearing_variance = 0.04;

  static MeasurementNoise from_config(const ScenarioConfig& config);
  double variance(MeasurementKind kind) const {
    return kind == MeasurementKind::Range ? range_variance : bearing_variance;
  }
};

/// Mean moves by the known circular drift at target_model.phase_time; the
/// drift does not depend on the state, so covariance gains Q dt.
EkfBelief ekf_predict(const EkfBelief& belief, const TargetState& target_model, double dt,
                      const Eigen::Matrix2d& process_cov);

/// Stacked EKF update with Jacobians evaluated at the predicted mean.
/// Bearing innovations are wrapped to (-pi, pi]; covariance uses the Joseph
/// form and is re-symmetrised. `robots` is indexed by Measurement::robot_index.
/// Throws SingularInnovationCovariance, CoincidentPositions (bearing rows with
/// the mean on top of the robot) and InvariantViolation (covariance lost PSD).
EkfBelief ekf_update(const EkfBelief& belief, std::span<const Measurement> measurements,
                     std::span<const RobotState> robots, const MeasurementNoise& noise);

}  // namespace hetsense
