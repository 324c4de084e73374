#include "hetsense/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hetsense/errors.hpp"

namespace hetsense {

double wrap_angle(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  if (r > kPi) r -= 2.0 * kPi;
  return r;
}

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

Vec2 TargetState::drift() const {
  const double speed = radius * angular_rate;
  const double phase = angular_rate * phase_time;
  return {-speed * std::sin(phase), speed * std::cos(phase)};
}

TargetState make_target(Vec2 position, double radius, double angular_rate, double phase_time) {
  if (!(radius > 0.0)) {
    throw ConfigError("target radius must be positive, got " + std::to_string(radius));
  }
  return TargetState{position, radius, angular_rate, phase_time};
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(n_sufficient >= 0 && n_limited >= 0, "robot counts must be non-negative");
  require(n_targets >= 0, "n_targets must be non-negative");
  require(time_steps >= 1, "time_steps must be >= 1");
  require(dt > 0.0, "dt must be > 0");
  require(process_noise_sigma > 0.0, "process_noise_sigma must be > 0");
  require(range_noise_sigma > 0.0, "range_noise_sigma must be > 0");
  require(bearing_noise_sigma > 0.0, "bearing_noise_sigma must be > 0");
  require(target_speed > 0.0, "target_speed must be > 0 (radius would be zero)");
  require(target_angular_rate != 0.0, "target_angular_rate must be non-zero");
  require(robot_max_speed > 0.0, "robot_max_speed must be > 0");
  require(placement_box_half_width > 0.0, "placement_box_half_width must be > 0");
  if (n_sufficient + n_limited / 2 < n_targets) {
    throw InfeasibleScenario("need n_sufficient + floor(n_limited/2) >= n_targets, got " +
                             std::to_string(n_sufficient) + " + floor(" +
                             std::to_string(n_limited) + "/2) < " + std::to_string(n_targets));
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T value{};
  is >> value;
  if (is.fail() || !(is >> std::ws).eof()) {
    throw ConfigError("bad value for '" + key + "': '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("bad boolean for '" + key + "': '" + text + "'");
}

LimitedSensorKind parse_sensor_kind(const std::string& text) {
  if (text == "RangeOnly" || text == "range_only" || text == "range") {
    return LimitedSensorKind::RangeOnly;
  }
  if (text == "BearingOnly" || text == "bearing_only" || text == "bearing") {
    return LimitedSensorKind::BearingOnly;
  }
  throw ConfigError("bad limited_sensor_kind: '" + text + "'");
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "n_sufficient") c.n_sufficient = parse_number<int>(key, value);
    else if (key == "n_limited") c.n_limited = parse_number<int>(key, value);
    else if (key == "n_targets") c.n_targets = parse_number<int>(key, value);
    else if (key == "time_steps") c.time_steps = parse_number<int>(key, value);
    else if (key == "dt") c.dt = parse_number<double>(key, value);
    else if (key == "process_noise_sigma") c.process_noise_sigma = parse_number<double>(key, value);
    else if (key == "range_noise_sigma") c.range_noise_sigma = parse_number<double>(key, value);
    else if (key == "bearing_noise_sigma") c.bearing_noise_sigma = parse_number<double>(key, value);
    else if (key == "target_speed") c.target_speed = parse_number<double>(key, value);
    else if (key == "target_angular_rate") c.target_angular_rate = parse_number<double>(key, value);
    else if (key == "robot_max_speed") c.robot_max_speed = parse_number<double>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "limited_sensor_kind") c.limited_sensor_kind = parse_sensor_kind(value);
    else if (key == "placement_box_half_width") c.placement_box_half_width = parse_number<double>(key, value);
    else if (key == "inject_noise") c.inject_noise = parse_bool(key, value);
    else throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "n_sufficient = " << c.n_sufficient << '\n'
     << "n_limited = " << c.n_limited << '\n'
     << "n_targets = " << c.n_targets << '\n'
     << "time_steps = " << c.time_steps << '\n'
     << "dt = " << c.dt << '\n'
     << "process_noise_sigma = " << c.process_noise_sigma << '\n'
     << "range_noise_sigma = " << c.range_noise_sigma << '\n'
     << "bearing_noise_sigma = " << c.bearing_noise_sigma << '\n'
     << "target_speed = " << c.target_speed << '\n'
     << "target_angular_rate = " << c.target_angular_rate << '\n'
     << "robot_max_speed = " << c.robot_max_speed << '\n'
     << "seed = " << c.seed << '\n'
     << "limited_sensor_kind = "
     << (c.limited_sensor_kind == LimitedSensorKind::RangeOnly ? "RangeOnly" : "BearingOnly") << '\n'
     << "placement_box_half_width = " << c.placement_box_half_width << '\n'
     << "inject_noise = " << (c.inject_noise ? "true" : "false") << '\n';
  return os.str();
}

double derive_target_radius(double speed, double angular_rate) {
  if (angular_rate == 0.0) throw ZeroAngularRate("target angular rate must be non-zero");
  return speed / std::abs(angular_rate);
}

NoiseSource::NoiseSource(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double NoiseSource::gaussian(double sigma) {
  if (sigma == 0.0) return 0.0;
  return sigma * normal_(engine_);
}

double NoiseSource::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

WorldState build_scenario(const ScenarioConfig& config) {
  config.validate();
  NoiseSource rng(config.seed, /*stream=*/0);
  const double half = config.placement_box_half_width;

  WorldState world;
  const int n_robots = config.n_sufficient + config.n_limited;
  world.robots.reserve(static_cast<std::size_t>(n_robots));
  for (int i = 0; i < n_robots; ++i) {
    RobotState r;
    r.position.x = rng.uniform(-half, half);
    r.position.y = rng.uniform(-half, half);
    r.heading = wrap_angle(rng.uniform(-kPi, kPi));
    r.kind = i < config.n_sufficient ? RobotKind::Sufficient : RobotKind::Limited;
    world.robots.push_back(r);
  }

  const double radius = derive_target_radius(config.target_speed, config.target_angular_rate);
  const double period = 2.0 * kPi / std::abs(config.target_angular_rate);
  world.targets.reserve(static_cast<std::size_t>(config.n_targets));
  for (int j = 0; j < config.n_targets; ++j) {
    Vec2 p{rng.uniform(-half, half), rng.uniform(-half, half)};
    const double phase_time = rng.uniform(0.0, period);
    world.targets.push_back(make_target(p, radius, config.target_angular_rate, phase_time));
  }
  return world;
}

}  // namespace hetsense
