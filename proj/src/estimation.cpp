#include "hetsense/estimation.hpp"

#include <cmath>
#include <stdexcept>

#include "hetsense/errors.hpp"
#include "hetsense/observability.hpp"

namespace hetsense {

EkfBelief initial_belief(Vec2 true_position) {
  EkfBelief b;
  b.mean = Eigen::Vector2d(true_position.x, true_position.y) + kInitialMeanOffset;
  b.covariance = kInitialVariance * Eigen::Matrix2d::Identity();
  return b;
}

MeasurementNoise MeasurementNoise::from_config(const ScenarioConfig& config) {
  return {config.range_noise_sigma * config.range_noise_sigma,
          config.bearing_noise_sigma * config.bearing_noise_sigma};
}

EkfBelief ekf_predict(const EkfBelief& belief, const TargetState& target_model, double dt,
                      const Eigen::Matrix2d& process_cov) {
  const Vec2 v = target_model.drift();
  EkfBelief out = belief;
  out.mean += dt * Eigen::Vector2d(v.x, v.y);
  out.covariance += dt * process_cov;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

namespace {

void clamp_psd(Eigen::Matrix2d& p) {
  p = 0.5 * (p + p.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(p);
  const Eigen::Vector2d values = eig.eigenvalues();
  if (values.minCoeff() < -1e-10) {
    throw InvariantViolation("EKF covariance lost positive semi-definiteness");
  }
  if (values.minCoeff() < 0.0) {
    const Eigen::Vector2d clamped = values.cwiseMax(0.0);
    p = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
    p = 0.5 * (p + p.transpose()).eval();
  }
}

}  // namespace

EkfBelief ekf_update(const EkfBelief& belief, std::span<const Measurement> measurements,
                     std::span<const RobotState> robots, const MeasurementNoise& noise) {
  if (measurements.empty()) return belief;

  const auto m = static_cast<Eigen::Index>(measurements.size());
  Eigen::MatrixXd h(m, 2);
  Eigen::VectorXd innovation(m);
  Eigen::VectorXd r_diag(m);

  TargetState predicted;
  predicted.position = {belief.mean.x(), belief.mean.y()};

  for (Eigen::Index k = 0; k < m; ++k) {
    const Measurement& z = measurements[static_cast<std::size_t>(k)];
    if (z.robot_index >= robots.size()) throw std::out_of_range("measurement robot index");
    const RobotState& robot = robots[z.robot_index];
    Row2 row;
    double expected = 0.0;
    if (z.kind == MeasurementKind::Range) {
      row = range_jacobian(robot, predicted);
      expected = range_measurement(robot, predicted, 0.0).value;
      innovation(k) = z.value - expected;
    } else {
      row = bearing_jacobian(robot, predicted);
      expected = bearing_measurement(robot, predicted, 0.0).value;
      innovation(k) = wrap_angle(z.value - expected);
    }
    h(k, 0) = row[0];
    h(k, 1) = row[1];
    r_diag(k) = noise.variance(z.kind);
  }

  const Eigen::Matrix2d& p = belief.covariance;
  const Eigen::MatrixXd r = r_diag.asDiagonal();
  const Eigen::MatrixXd s = h * p * h.transpose() + r;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-300) {
    throw SingularInnovationCovariance("innovation covariance is not invertible");
  }
  // K = P H^T S^-1
  const Eigen::MatrixXd gain = ldlt.solve(h * p).transpose();

  EkfBelief out;
  out.mean = belief.mean + gain * innovation;
  const Eigen::Matrix2d i_kh = Eigen::Matrix2d::Identity() - gain * h;
  out.covariance = i_kh * p * i_kh.transpose() + gain * r * gain.transpose();
  clamp_psd(out.covariance);
  return out;
}

}  // namespace hetsense
