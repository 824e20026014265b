// redlight: optimal approach to a red traffic light that turns green at a
// random time. Solves, evaluates, and cross-checks velocity profiles for
// Uniform and Exponential green-time laws.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "redlight/cost.hpp"
#include "redlight/json_io.hpp"
#include "redlight/log.hpp"
#include "redlight/oracle.hpp"
#include "redlight/solver_exponential.hpp"
#include "redlight/solver_uniform.hpp"

namespace {

using nlohmann::json;
using namespace redlight;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitRejected = 2;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

// "MIN:MAX:N" range syntax for phase-diagram axes.
struct AxisRange {
  double lo = 0.0, hi = 1.0;
  int n = 2;
};

AxisRange parse_range(const std::string& s) {
  AxisRange r;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> r.lo >> c1 >> r.hi >> c2 >> r.n) || c1 != ':' || c2 != ':' ||
      r.n < 1)
    throw std::runtime_error("expected MIN:MAX:N, got '" + s + "'");
  return r;
}

double axis_value(const AxisRange& r, int i) {
  if (r.n == 1) return r.lo;
  return r.lo + (r.hi - r.lo) * static_cast<double>(i) / (r.n - 1);
}

SolveReport solve_any(const ProblemSpec& p) {
  if (p.dist.kind() == GreenDistribution::Kind::Uniform)
    return solve_uniform(p);
  if (p.dist.kind() == GreenDistribution::Kind::Exponential)
    return solve_exponential(p);
  throw std::runtime_error("solve: only uniform and exponential instances");
}

int reject(const ValidationResult& vr) {
  json out = validation_to_json(vr);
  out["error"] = vr.feasible ? "trivial" : "infeasible";
  std::cout << out.dump(2) << "\n";
  return kExitRejected;
}

int cmd_solve(const std::string& problem_path, const std::string& out_path,
              const std::string& csv_path, double csv_step) {
  const ProblemSpec p = problem_from_json(read_json_file(problem_path));
  if (p.dist.kind() == GreenDistribution::Kind::Excess) {
    std::cout << json{{"error", "unsupported-distribution"},
                      {"reasons", {"solve-needs-uniform-or-exponential"}}}
                     .dump(2)
              << "\n";
    return kExitRejected;
  }
  const ValidationResult vr = validate_problem(p);
  if (!vr.ok()) return reject(vr);
  log(LogLevel::Info, "solving " + problem_path);
  const SolveReport report = solve_any(p);
  log(LogLevel::Debug, "pattern " + report.pattern.name());
  write_output(report_to_json(report).dump(2), out_path);
  if (!csv_path.empty()) {
    const Trajectory& traj = report.trajectory;
    const double t_hi =
        p.dist.unbounded() ? traj.stop_time() : p.dist.q_support();
    const double step = csv_step > 0.0 ? csv_step : t_hi / 1000.0;
    std::ostringstream csv;
    csv << "t,v,x\n";
    for (double t = 0.0; t <= t_hi + 0.5 * step; t += step) {
      const double tc = std::min(t, t_hi);
      csv << format_double(tc) << "," << format_double(traj.velocity_at(tc))
          << "," << format_double(traj.position_at(tc)) << "\n";
    }
    write_output(csv.str(), csv_path);
  }
  return kExitOk;
}

int cmd_validate(const std::string& problem_path) {
  const ProblemSpec p = problem_from_json(read_json_file(problem_path));
  const ValidationResult vr = validate_problem(p);
  std::cout << validation_to_json(vr).dump(2) << "\n";
  return vr.ok() ? kExitOk : kExitRejected;
}

int cmd_evaluate(const std::string& problem_path,
                 const std::string& trajectory_path, std::int64_t mc_n,
                 std::uint64_t seed, const std::string& out_path) {
  const ProblemSpec p = problem_from_json(read_json_file(problem_path));
  const Trajectory traj = trajectory_from_json(read_json_file(trajectory_path), p);
  json out{{"expected_arrival", expected_arrival(traj, p)}};
  if (mc_n > 0) {
    const McEstimate mc = expected_arrival_mc(traj, p, mc_n, seed);
    out["mc_mean"] = mc.mean;
    out["mc_stderr"] = mc.std_error;
  }
  write_output(out.dump(2), out_path);
  return kExitOk;
}

int cmd_phase_diagram(const std::string& problem_path, const std::string& v0_s,
                      const std::string& d_s, const std::string& out_path) {
  const ProblemSpec base = problem_from_json(read_json_file(problem_path));
  const AxisRange v0r = parse_range(v0_s);
  const AxisRange dr = parse_range(d_s);
  std::ostringstream csv;
  csv << "v0,d,pattern,cost\n";
  for (int i = 0; i < v0r.n; ++i) {
    for (int j = 0; j < dr.n; ++j) {
      ProblemSpec p = base;
      p.v0 = axis_value(v0r, i);
      p.d = axis_value(dr, j);
      p.L = std::max(p.L, p.d);
      csv << format_double(p.v0) << "," << format_double(p.d) << ",";
      const ValidationResult vr = validate_problem(p);
      if (!vr.feasible) {
        csv << "infeasible,\n";
        continue;
      }
      if (vr.trivial) {
        csv << "trivial,\n";
        continue;
      }
      const SolveReport rep = solve_any(p);
      csv << rep.pattern.name() << ","
          << format_double(rep.expected_arrival_time) << "\n";
    }
  }
  write_output(csv.str(), out_path);
  return kExitOk;
}

int cmd_sweep_vc(const std::string& problem_path, int points,
                 const std::string& out_path) {
  const ProblemSpec p = problem_from_json(read_json_file(problem_path));
  const ValidationResult vr = validate_problem(p);
  if (!vr.ok()) return reject(vr);
  const PhasePattern family{{Phase::EL, Phase::Beta}, true};
  const SweepResult sweep = sweep_switch_velocity(p, family, points);
  std::ostringstream csv;
  csv << "v_c,expected_cost\n";
  for (const auto& pt : sweep.points) {
    csv << format_double(pt.v_c) << ",";
    if (pt.cost) csv << format_double(*pt.cost);
    csv << "\n";
  }
  write_output(csv.str(), out_path);
  return kExitOk;
}

int cmd_oracle_dp(const std::string& problem_path, double dt, double dv,
                  int buckets, const std::string& csv_path,
                  const std::string& out_path) {
  const ProblemSpec p = problem_from_json(read_json_file(problem_path));
  const ValidationResult vr = validate_problem(p);
  if (!vr.ok()) return reject(vr);
  DPGrid grid;
  grid.dt = dt;
  grid.dv = dv;
  grid.position_buckets = buckets;
  const DPResult dp = dp_min_cost(p, grid);
  const SolveReport rep = solve_any(p);
  json out{{"dp_cost", dp.cost},
           {"solver_cost", rep.expected_arrival_time},
           {"gap", dp.cost - rep.expected_arrival_time}};
  write_output(out.dump(2), out_path);
  if (!csv_path.empty()) {
    std::ostringstream csv;
    csv << "t,v,x,a\n";
    for (const auto& s : dp.trace)
      csv << format_double(s.t) << "," << format_double(s.v) << ","
          << format_double(s.x) << "," << format_double(s.a) << "\n";
    write_output(csv.str(), csv_path);
  }
  return kExitOk;
}

int cmd_oracle_perturb(const std::string& problem_path, int n,
                       std::uint64_t seed, const std::string& out_path) {
  const ProblemSpec p = problem_from_json(read_json_file(problem_path));
  const ValidationResult vr = validate_problem(p);
  if (!vr.ok()) return reject(vr);
  const SolveReport rep = solve_any(p);
  const PerturbationResult pr =
      perturbation_test(rep.trajectory, p, n, seed);
  json out{{"min_delta", pr.min_delta},
           {"base_cost", pr.base_cost},
           {"trials", pr.trials}};
  write_output(out.dump(2), out_path);
  return kExitOk;
}

int cmd_oracle_sweep(const std::string& problem_path, int points,
                     const std::string& csv_path, const std::string& out_path) {
  const ProblemSpec p = problem_from_json(read_json_file(problem_path));
  const ValidationResult vr = validate_problem(p);
  if (!vr.ok()) return reject(vr);
  const PhasePattern family{{Phase::EL, Phase::Beta}, true};
  const SweepResult sweep = sweep_switch_velocity(p, family, points);
  json out;
  if (sweep.argmin_vc) {
    out["argmin_vc"] = *sweep.argmin_vc;
    out["argmin_cost"] = sweep.argmin_cost;
  }
  write_output(out.dump(2), out_path);
  if (!csv_path.empty()) {
    std::ostringstream csv;
    csv << "v_c,expected_cost\n";
    for (const auto& pt : sweep.points) {
      csv << format_double(pt.v_c) << ",";
      if (pt.cost) csv << format_double(*pt.cost);
      csv << "\n";
    }
    write_output(csv.str(), csv_path);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal velocity profiles at a random red light"};
  app.require_subcommand(1);

  std::string problem_path, trajectory_path, out_path, csv_path;
  std::string v0_range, d_range;
  std::int64_t mc_n = 0;
  std::uint64_t seed = 12345;
  int points = 401;
  int n_perturb = 1000;
  double dp_dt = 0.1, dp_dv = 1.0;
  int dp_buckets = 512;

  double csv_step = 0.0;
  auto* solve = app.add_subcommand("solve", "solve a problem instance");
  solve->add_option("--problem", problem_path)->required();
  solve->add_option("--out", out_path);
  solve->add_option("--csv", csv_path)->description("sample t,v,x to a csv");
  solve->add_option("--csv-step", csv_step);

  auto* validate = app.add_subcommand("validate", "check feasibility");
  validate->add_option("--problem", problem_path)->required();

  auto* evaluate = app.add_subcommand("evaluate", "evaluate a trajectory");
  evaluate->add_option("--problem", problem_path)->required();
  evaluate->add_option("--trajectory", trajectory_path)->required();
  evaluate->add_option("--mc", mc_n);
  evaluate->add_option("--seed", seed);
  evaluate->add_option("--out", out_path);

  auto* phase = app.add_subcommand("phase-diagram", "pattern map over (v0, d)");
  phase->add_option("--problem", problem_path)->required();
  phase->add_option("--v0", v0_range)->required();
  phase->add_option("--d", d_range)->required();
  phase->add_option("--out", out_path);

  auto* sweep = app.add_subcommand("sweep-vc", "cost vs switch velocity");
  sweep->add_option("--problem", problem_path)->required();
  sweep->add_option("--points", points);
  sweep->add_option("--out", out_path);

  auto* oracle = app.add_subcommand("oracle", "independent verification");
  oracle->require_subcommand(1);
  auto* odp = oracle->add_subcommand("dp", "grid dynamic programming bound");
  odp->add_option("--problem", problem_path)->required();
  odp->add_option("--dt", dp_dt)->required();
  odp->add_option("--dv", dp_dv)->required();
  odp->add_option("--buckets", dp_buckets);
  odp->add_option("--csv", csv_path);
  odp->add_option("--out", out_path);
  auto* operturb = oracle->add_subcommand("perturb", "local optimality probe");
  operturb->add_option("--problem", problem_path)->required();
  operturb->add_option("--n", n_perturb);
  operturb->add_option("--seed", seed);
  operturb->add_option("--out", out_path);
  auto* osweep = oracle->add_subcommand("sweep", "switch-velocity sweep");
  osweep->add_option("--problem", problem_path)->required();
  osweep->add_option("--points", points);
  osweep->add_option("--csv", csv_path);
  osweep->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return cmd_solve(problem_path, out_path, csv_path, csv_step);
    if (validate->parsed()) return cmd_validate(problem_path);
    if (evaluate->parsed())
      return cmd_evaluate(problem_path, trajectory_path, mc_n, seed, out_path);
    if (phase->parsed())
      return cmd_phase_diagram(problem_path, v0_range, d_range, out_path);
    if (sweep->parsed()) return cmd_sweep_vc(problem_path, points, out_path);
    if (oracle->parsed()) {
      if (odp->parsed())
        return cmd_oracle_dp(problem_path, dp_dt, dp_dv, dp_buckets, csv_path,
                             out_path);
      if (operturb->parsed())
        return cmd_oracle_perturb(problem_path, n_perturb, seed, out_path);
      if (osweep->parsed())
        return cmd_oracle_sweep(problem_path, points, csv_path, out_path);
    }
  } catch (const SchemaError& e) {
    log(LogLevel::Error, e.what());
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitRejected;
  } catch (const std::exception& e) {
    log(LogLevel::Error, e.what());
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
