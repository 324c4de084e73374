#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hetsense/assignment.hpp"
#include "hetsense/errors.hpp"
#include "hetsense/harness.hpp"

namespace fs = std::filesystem;
using namespace hetsense;

namespace {

constexpr int kExitInvariant = 2;
constexpr int kExitConfig = 3;

Policy parse_policy(const std::string& s) {
  if (s == "greedy") return Policy::Greedy;
  if (s == "optimal") return Policy::Optimal;
  return Policy::Both;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::vector<RatioRow> ratio_rows(const RunResult& r, const ScenarioConfig& c) {
  std::vector<RatioRow> rows;
  for (const StepRecord& s : r.steps) {
    if (!s.optimal_total) continue;
    rows.push_back({c.seed, c.n_targets, s.step, s.greedy_total, *s.optimal_total, s.quality_shift,
                    s.greedy_total_shifted, *s.optimal_total_shifted, *s.ratio()});
  }
  return rows;
}

int cmd_run(const std::string& config_path, const std::string& policy_name, const fs::path& out) {
  const ScenarioConfig config = load_config(config_path);
  const Policy policy = parse_policy(policy_name);
  const RunResult r = run(config, policy);
  ensure_dir(out);
  write_steps_csv(out / "steps.csv", r.steps);
  write_assignments_csv(out / "assignments.csv", r.steps);
  write_robots_csv(out / "robots.csv", r.steps);
  write_summary_csv(out / "summary.csv", r.summary);
  if (policy != Policy::Greedy) write_ratios_csv(out / "ratios.csv", ratio_rows(r, config));

  std::cout << std::setprecision(6);
  for (std::size_t t = 0; t < r.summary.rmse.size(); ++t) {
    std::cout << "target " << t << " rmse(k=" << r.summary.checkpoints.back() << ") = " << r.summary.rmse[t].back()
              << " m\n";
  }
  const ControlStats& cs = r.summary.control;
  std::cout << "control solves " << cs.solves << ", converged " << cs.converged << '\n';
  if (r.summary.final_ratio) std::cout << "final greedy/optimal ratio " << *r.summary.final_ratio << '\n';

  for (const StepRecord& s : r.steps) {
    if (const auto ratio = s.ratio(); ratio && (*ratio < 0.5 - kRatioTolerance || *ratio > 1.0 + kRatioTolerance)) {
      std::cerr << "ratio " << *ratio << " outside [0.5, 1] at step " << s.step << '\n';
      return kExitInvariant;
    }
  }
  return 0;
}

int cmd_compare(const std::string& config_path, int n_seeds, const fs::path& out) {
  const ScenarioConfig config = load_config(config_path);
  if (n_seeds < 1) throw ConfigError("--seeds must be >= 1");
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n_seeds; ++i) seeds.push_back(config.seed + static_cast<std::uint64_t>(i));
  const ComparisonResult r = compare_policies(config, seeds);
  ensure_dir(out);
  write_ratios_csv(out / "ratios.csv", r.rows);
  std::cout << std::setprecision(6) << "rows " << r.rows.size() << ", ratio min " << r.min_ratio << ", max "
            << r.max_ratio << ", violations " << r.violations << '\n';
  return r.violations == 0 ? 0 : kExitInvariant;
}

int cmd_bounds(const std::string& mode_name, int instances, std::uint64_t seed, int n1, int n2, int m,
               const std::string& table_path, const std::string& out) {
  const BoundMode mode = mode_name == "arbitrary" ? BoundMode::Arbitrary : BoundMode::Submodular;
  std::vector<RatioRow> rows;
  std::size_t violations = 0;
  auto check = [&](const QualityTable& q, std::uint64_t id) {
    const AssignResult g = greedy_assign(q);
    const AssignResult o = optimal_assign(q);
    const bool ok = verify_bound(g.total, o.total, mode);
    if (!ok) ++violations;
    const double ratio = o.total == 0.0 ? 1.0 : g.total / o.total;
    rows.push_back({id, q.n_targets(), 0, g.total, o.total, 0.0, g.total, o.total, ratio});
  };

  if (!table_path.empty()) {
    std::ifstream in(table_path);
    if (!in) throw ConfigError("cannot open quality table " + table_path);
    try {
      check(read_quality_csv(in), 0);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("bad quality table: ") + e.what());
    }
  } else {
    if (instances < 1) throw ConfigError("--instances must be >= 1");
    if (n1 < 0 || n2 < 0 || m < 1) throw ConfigError("table sizes must be non-negative with at least one target");
    NoiseSource rng(seed, 0);
    for (int i = 0; i < instances; ++i) check(random_quality_table(mode, n1, n2, m, rng), static_cast<std::uint64_t>(i));
  }

  double worst = 1.0;
  for (const RatioRow& r : rows) worst = std::min(worst, r.ratio);
  std::cout << std::setprecision(6) << "instances " << rows.size() << ", worst greedy/optimal " << worst
            << ", bound " << (mode == BoundMode::Arbitrary ? "1/3" : "1/2") << ", violations " << violations
            << '\n';
  if (!out.empty()) {
    ensure_dir(out);
    write_ratios_csv(fs::path(out) / "ratios.csv", rows);
  }
  return violations == 0 ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous multi-robot target tracking simulator"};
  app.require_subcommand(1);

  std::string config_path, policy = "greedy", out;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario");
  run_cmd->add_option("--config", config_path, "Scenario file")->required();
  run_cmd->add_option("--policy", policy, "Assignment policy")
      ->check(CLI::IsMember({"greedy", "optimal", "both"}));
  run_cmd->add_option("--out", out, "Output directory")->required();

  int seeds = 50;
  auto* cmp_cmd = app.add_subcommand("compare", "Greedy vs optimal ratios over consecutive seeds");
  cmp_cmd->add_option("--config", config_path, "Scenario file")->required();
  cmp_cmd->add_option("--seeds", seeds, "Number of seeds, starting at the config seed");
  cmp_cmd->add_option("--out", out, "Output directory")->required();

  std::string mode = "submodular", table_path;
  int instances = 200, n1 = 2, n2 = 3, m = 3;
  std::uint64_t seed = 1;
  auto* bounds_cmd = app.add_subcommand("bounds", "Check approximation bounds on synthetic quality tables");
  bounds_cmd->add_option("--mode", mode, "Table family")->check(CLI::IsMember({"arbitrary", "submodular"}));
  bounds_cmd->add_option("--instances", instances, "Number of random tables");
  bounds_cmd->add_option("--seed", seed, "Generator seed");
  bounds_cmd->add_option("--n-sufficient", n1, "Sufficient robots per table");
  bounds_cmd->add_option("--n-limited", n2, "Limited robots per table");
  bounds_cmd->add_option("--n-targets", m, "Targets per table");
  bounds_cmd->add_option("--table", table_path, "Check one table read from CSV instead");
  bounds_cmd->add_option("--out", out, "Optional output directory for ratios.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(config_path, policy, out);
    if (*cmp_cmd) return cmd_compare(config_path, seeds, out);
    return cmd_bounds(mode, instances, seed, n1, n2, m, table_path, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InstanceTooLarge& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ZeroAngularRate& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
