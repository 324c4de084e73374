#include <fstream>

#include "hetsense/errors.hpp"
#include "hetsense/harness.hpp"

namespace hetsense {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(6);
  return out;
}

std::string unit_label(const std::optional<AssignableUnit>& u) { return u ? u->label() : "none"; }

void write_assignment_rows(std::ostream& out, int step, const char* policy, const Assignment& a) {
  for (const auto& [target, unit] : a) {
    out << step << ',' << policy << ',' << target << ',' << unit.label() << ',' << unit.first() << ','
        << (unit.is_pair() ? unit.second() : -1) << '\n';
  }
}

}  // namespace

void write_steps_csv(const std::filesystem::path& path, std::span<const StepRecord> steps) {
  auto out = open_csv(path);
  out << "step,target_id,true_x,true_y,est_x,est_y,error_m,cov_trace,unit_id\n";
  for (const StepRecord& s : steps) {
    for (std::size_t t = 0; t < s.targets.size(); ++t) {
      const TargetRecord& r = s.targets[t];
      out << s.step << ',' << t << ',' << r.truth.x << ',' << r.truth.y << ',' << r.estimate.x << ','
          << r.estimate.y << ',' << r.error << ',' << r.cov_trace << ',' << unit_label(r.unit) << '\n';
    }
  }
}

void write_assignments_csv(const std::filesystem::path& path, std::span<const StepRecord> steps) {
  auto out = open_csv(path);
  out << "step,policy,target_id,unit_id,robot_a,robot_b\n";
  for (const StepRecord& s : steps) {
    write_assignment_rows(out, s.step, "greedy", s.greedy_assignment);
    if (s.optimal_assignment) write_assignment_rows(out, s.step, "optimal", *s.optimal_assignment);
  }
}

void write_robots_csv(const std::filesystem::path& path, std::span<const StepRecord> steps) {
  auto out = open_csv(path);
  out << "step,robot_id,kind,x,y,heading,v,omega,target_id,residual,converged\n";
  for (const StepRecord& s : steps) {
    for (std::size_t r = 0; r < s.robots.size(); ++r) {
      const RobotRecord& rr = s.robots[r];
      out << s.step << ',' << r << ',' << (rr.state.kind == RobotKind::Sufficient ? "sufficient" : "limited")
          << ',' << rr.state.position.x << ',' << rr.state.position.y << ',' << rr.state.heading << ','
          << rr.action.linear_velocity << ',' << rr.action.angular_velocity << ','
          << (rr.target ? *rr.target : -1) << ',' << rr.residual << ',' << (rr.converged ? 1 : 0) << '\n';
    }
  }
}

void write_summary_csv(const std::filesystem::path& path, const RunSummary& summary) {
  auto out = open_csv(path);
  out << "step,target_id,rmse_m\n";
  for (std::size_t i = 0; i < summary.checkpoints.size(); ++i) {
    for (std::size_t t = 0; t < summary.rmse.size(); ++t) {
      out << summary.checkpoints[i] << ',' << t << ',' << summary.rmse[t][i] << '\n';
    }
  }
}

void write_ratios_csv(const std::filesystem::path& path, std::span<const RatioRow> rows) {
  auto out = open_csv(path);
  out << "seed,n_targets,step,greedy_q,optimal_q,shift,greedy_q_shifted,optimal_q_shifted,ratio\n";
  for (const RatioRow& r : rows) {
    out << r.seed << ',' << r.n_targets << ',' << r.step << ',' << r.greedy << ',' << r.optimal << ','
        << r.shift << ',' << r.greedy_shifted << ',' << r.optimal_shifted << ',' << r.ratio << '\n';
  }
}

}  // namespace hetsense
