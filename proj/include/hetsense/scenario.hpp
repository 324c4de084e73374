#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace hetsense {

inline constexpr double kPi = 3.14159265358979323846;

/// Maps an angle to (-pi, pi].
double wrap_angle(double angle);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double norm(Vec2 v);

enum class RobotKind { Sufficient, Limited };
enum class LimitedSensorKind { RangeOnly, BearingOnly };

struct ScenarioConfig {
  int n_sufficient = 2;
  int n_limited = 3;
  int n_targets = 2;
  int time_steps = 100;
  double dt = 0.1;
  double process_noise_sigma = 0.2;
  double range_noise_sigma = 0.2;
  double bearing_noise_sigma = 0.2;
  double target_speed = 2.0;
  double target_angular_rate = 0.1;
  double robot_max_speed = 2.0;
  std::uint64_t seed = 1;
  LimitedSensorKind limited_sensor_kind = LimitedSensorKind::RangeOnly;
  double placement_box_half_width = 10.0;
  // When false the world evolves and is sensed without noise; the filter
  // still models the configured sigmas.
  bool inject_noise = true;

  /// Throws ConfigError / InfeasibleScenario when an invariant fails.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses the flat `key = value` format. Unknown keys and bad values throw
/// ConfigError. Keys not present keep their defaults.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string format_config(const ScenarioConfig& config);

struct RobotState {
  Vec2 position;
  double heading = 0.0;
  RobotKind kind = RobotKind::Sufficient;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct RobotAction {
  double linear_velocity = 0.0;
  double angular_velocity = 0.0;

  friend bool operator==(const RobotAction&, const RobotAction&) = default;
};

struct TargetState {
  Vec2 position;
  double radius = 1.0;
  double angular_rate = 0.1;
  double phase_time = 0.0;

  /// Noiseless velocity of the circular motion at the current phase time.
  Vec2 drift() const;

  friend bool operator==(const TargetState&, const TargetState&) = default;
};

/// Validated constructor; radius must be positive.
TargetState make_target(Vec2 position, double radius, double angular_rate, double phase_time);

struct WorldState {
  std::vector<RobotState> robots;
  std::vector<TargetState> targets;
  int step = 0;
  double clock = 0.0;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

double derive_target_radius(double speed, double angular_rate);

/// Robots uniform in the placement box (sufficient first, then limited).
/// Targets start uniform in the box on a circle of radius v/|phi| with a
/// uniformly random initial phase.
WorldState build_scenario(const ScenarioConfig& config);

/// Gaussian noise source with a fixed seed and stream id.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, std::uint64_t stream);

  /// Sample from N(0, sigma^2); sigma == 0 returns exactly 0 without
  /// consuming the engine.
  double gaussian(double sigma);
  double uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace hetsense
