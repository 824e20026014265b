#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "redlight/cost.hpp"
#include "redlight/json_io.hpp"
#include "redlight/solver_exponential.hpp"

using namespace redlight;
using nlohmann::json;

namespace {

const char* kCli = REDLIGHT_CLI_PATH;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

int run(const std::string& args, const std::string& stdout_path) {
  const std::string cmd =
      std::string(kCli) + " " + args + " > " + stdout_path + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

json figure_problem_json() {
  return json{{"alpha", 6.0},   {"beta", 20.0}, {"v_max", 200.0},
              {"v0", 200.0},    {"d", 4000.0},  {"L", 4000.0},
              {"dist", {{"kind", "exponential"}, {"lambda", 0.1}}}};
}

}  // namespace

TEST_CASE("json round trip: problem and trajectory") {
  const ProblemSpec p = problem_from_json(figure_problem_json());
  CHECK(p.alpha == 6.0);
  CHECK(p.dist.lambda() == 0.1);
  const auto report = solve_exponential(p);
  const json tj = trajectory_to_json(report.trajectory);
  const Trajectory back = trajectory_from_json(tj, p);
  REQUIRE(back.segments().size() == report.trajectory.segments().size());
  for (std::size_t i = 0; i < back.segments().size(); ++i) {
    CHECK(back.segments()[i].t_start == report.trajectory.segments()[i].t_start);
    CHECK(back.segments()[i].v_start == report.trajectory.segments()[i].v_start);
  }
  CHECK(expected_arrival(back, p) ==
        doctest::Approx(report.expected_arrival_time).epsilon(1e-13));
}

TEST_CASE("strict schema: unknown fields are rejected with a path") {
  json j = figure_problem_json();
  j["typo_field"] = 1.0;
  CHECK_THROWS_AS((void)problem_from_json(j), SchemaError);
  json j2 = figure_problem_json();
  j2["dist"]["rate"] = 1.0;
  try {
    (void)problem_from_json(j2);
    CHECK(false);
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("dist.rate") != std::string::npos);
  }
}

TEST_CASE("cli solve -> evaluate round trip reproduces the cost") {
  spit("/tmp/rl_prob.json", figure_problem_json().dump());
  REQUIRE(run("solve --problem /tmp/rl_prob.json", "/tmp/rl_solve.json") == 0);
  const json report = json::parse(slurp("/tmp/rl_solve.json"));
  spit("/tmp/rl_traj.json", report.at("trajectory").dump());
  REQUIRE(run("evaluate --problem /tmp/rl_prob.json --trajectory /tmp/rl_traj.json",
              "/tmp/rl_eval.json") == 0);
  const json eval = json::parse(slurp("/tmp/rl_eval.json"));
  const double a = report.at("expected_arrival").get<double>();
  const double b = eval.at("expected_arrival").get<double>();
  CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
}

TEST_CASE("cli validate: stopping-infeasible exits 2 with the reason") {
  json j = figure_problem_json();
  j["d"] = 999.0;  // v0^2/(2 beta) = 1000
  spit("/tmp/rl_bad.json", j.dump());
  CHECK(run("validate --problem /tmp/rl_bad.json", "/tmp/rl_val.json") == 2);
  const json out = json::parse(slurp("/tmp/rl_val.json"));
  CHECK(out.at("feasible").get<bool>() == false);
  bool named = false;
  for (const auto& r : out.at("reasons"))
    if (r.get<std::string>() == "stopping-infeasible") named = true;
  CHECK(named);
}

TEST_CASE("cli solve on an infeasible instance exits 2") {
  json j = figure_problem_json();
  j["d"] = 10.0;
  spit("/tmp/rl_bad2.json", j.dump());
  CHECK(run("solve --problem /tmp/rl_bad2.json", "/tmp/rl_out2.json") == 2);
}

TEST_CASE("cli rejects unknown fields with exit 2") {
  json j = figure_problem_json();
  j["bogus"] = true;
  spit("/tmp/rl_bad3.json", j.dump());
  CHECK(run("solve --problem /tmp/rl_bad3.json", "/tmp/rl_out3.json") == 2);
}

TEST_CASE("cli runs are byte-identical for a fixed seed") {
  spit("/tmp/rl_prob.json", figure_problem_json().dump());
  spit("/tmp/rl_traj2.json",
       json::parse(slurp("/tmp/rl_solve.json")).at("trajectory").dump());
  REQUIRE(run("evaluate --problem /tmp/rl_prob.json --trajectory "
              "/tmp/rl_traj2.json --mc 20000 --seed 7",
              "/tmp/rl_mc_a.json") == 0);
  REQUIRE(run("evaluate --problem /tmp/rl_prob.json --trajectory "
              "/tmp/rl_traj2.json --mc 20000 --seed 7",
              "/tmp/rl_mc_b.json") == 0);
  CHECK(slurp("/tmp/rl_mc_a.json") == slurp("/tmp/rl_mc_b.json"));
}

TEST_CASE("cli solve reports the figure's switch velocity") {
  spit("/tmp/rl_prob.json", figure_problem_json().dump());
  REQUIRE(run("solve --problem /tmp/rl_prob.json", "/tmp/rl_solve.json") == 0);
  const json report = json::parse(slurp("/tmp/rl_solve.json"));
  CHECK(std::abs(report.at("v_c_star").get<double>() - 86.94) < 0.01);
  CHECK(report.at("pattern").get<std::string>() == "vmax-EL-beta-0");
}

TEST_CASE("cli solve samples t,v,x to csv") {
  spit("/tmp/rl_prob.json", figure_problem_json().dump());
  REQUIRE(run("solve --problem /tmp/rl_prob.json --out /tmp/rl_s2.json "
              "--csv /tmp/rl_tvx.csv --csv-step 0.5",
              "/tmp/rl_ignore.txt") == 0);
  const std::string csv = slurp("/tmp/rl_tvx.csv");
  CHECK(csv.rfind("t,v,x\n", 0) == 0);
  // starts at v0 = 200, x = 0
  CHECK(csv.find("\n0,200,0\n") != std::string::npos);
}

TEST_CASE("cli phase-diagram labels the v_beta <= 0 regime's regions") {
  json j = figure_problem_json();
  j["dist"]["lambda"] = 0.05;
  j["L"] = 20000.0;
  spit("/tmp/rl_prob3.json", j.dump());
  REQUIRE(run("phase-diagram --problem /tmp/rl_prob3.json --v0 20:180:12 "
              "--d 200:6500:12",
              "/tmp/rl_phase3.csv") == 0);
  const std::string csv = slurp("/tmp/rl_phase3.csv");
  CHECK(csv.find("beta-EL-0") != std::string::npos);
  CHECK(csv.find(",alpha-EL-0") != std::string::npos);
  CHECK(csv.find("alpha-vmax-EL-0") != std::string::npos);
}

TEST_CASE("cli phase-diagram emits a csv with the header") {
  spit("/tmp/rl_prob.json", figure_problem_json().dump());
  REQUIRE(run("phase-diagram --problem /tmp/rl_prob.json --v0 0:200:5 "
              "--d 500:5000:5",
              "/tmp/rl_phase.csv") == 0);
  const std::string csv = slurp("/tmp/rl_phase.csv");
  CHECK(csv.rfind("v0,d,pattern,cost\n", 0) == 0);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 26);
}

TEST_CASE("cli sweep-vc emits the curve") {
  spit("/tmp/rl_prob.json", figure_problem_json().dump());
  REQUIRE(run("sweep-vc --problem /tmp/rl_prob.json --points 11",
              "/tmp/rl_sweep.csv") == 0);
  const std::string csv = slurp("/tmp/rl_sweep.csv");
  CHECK(csv.rfind("v_c,expected_cost\n", 0) == 0);
}

TEST_CASE("cli oracle dp and perturb run end to end") {
  spit("/tmp/rl_prob.json", figure_problem_json().dump());
  REQUIRE(run("oracle dp --problem /tmp/rl_prob.json --dt 1.0 --dv 2.0",
              "/tmp/rl_dp.json") == 0);
  const json dp = json::parse(slurp("/tmp/rl_dp.json"));
  CHECK(dp.contains("dp_cost"));
  CHECK(dp.contains("solver_cost"));
  REQUIRE(run("oracle perturb --problem /tmp/rl_prob.json --n 25 --seed 3",
              "/tmp/rl_pert.json") == 0);
  const json pert = json::parse(slurp("/tmp/rl_pert.json"));
  CHECK(pert.at("min_delta").get<double>() >= -1e-7);
}
