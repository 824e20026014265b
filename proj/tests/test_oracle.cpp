#include <doctest.h>

#include <cmath>

#include "redlight/cost.hpp"
#include "redlight/euler_lagrange.hpp"
#include "redlight/oracle.hpp"
#include "redlight/solver_exponential.hpp"
#include "redlight/solver_uniform.hpp"

using namespace redlight;

namespace {

ProblemSpec figure() {
  return ProblemSpec{6.0, 20.0, 200.0, 200.0, 4000.0, 4000.0,
                     GreenDistribution::exponential(0.1)};
}

double exp_horizon(const ProblemSpec& p) {
  return -std::log(1e-9) / p.dist.lambda() + p.v_max / p.beta;
}

}  // namespace

TEST_CASE("dp_min_cost: single-profile instance matches the closed form") {
  // d = v0^2 / (2 beta): the only profile is immediate full braking.
  const double v0 = 120.0;
  ProblemSpec p{6.0, 20.0, 200.0, v0, v0 * v0 / 40.0, 8000.0,
                GreenDistribution::exponential(0.1)};
  const auto report = solve_exponential(p);
  DPGrid grid;
  grid.dt = exp_horizon(p) / 400.0;
  grid.dv = p.v_max / 200.0;
  const auto dp = dp_min_cost(p, grid);
  CHECK(dp.cost >= report.expected_arrival_time - 0.005 * report.expected_arrival_time);
  CHECK(dp.cost <= report.expected_arrival_time * 1.05);
}

TEST_CASE("dp_min_cost approaches the solver from above under refinement") {
  const auto p = figure();
  const auto report = solve_exponential(p);
  DPGrid coarse;
  coarse.dt = exp_horizon(p) / 400.0;
  coarse.dv = p.v_max / 200.0;
  const auto dp1 = dp_min_cost(p, coarse);
  DPGrid fine = coarse;
  fine.dt /= 2.0;
  fine.dv /= 2.0;
  const auto dp2 = dp_min_cost(p, fine);
  const double gap1 = dp1.cost - report.expected_arrival_time;
  const double gap2 = dp2.cost - report.expected_arrival_time;
  CHECK(gap1 > -0.005 * report.expected_arrival_time);
  CHECK(gap2 > -0.005 * report.expected_arrival_time);
  CHECK(gap2 < gap1);
}

TEST_CASE("dp_min_cost on a uniform instance tracks the solver") {
  ProblemSpec p{6.0, 20.0, 200.0, 50.0, 2000.0, 20000.0,
                GreenDistribution::uniform(100.0)};
  const auto report = solve_uniform(p);
  DPGrid grid;
  grid.dt = 100.0 / 400.0;
  grid.dv = p.v_max / 200.0;
  const auto dp = dp_min_cost(p, grid);
  CHECK(dp.cost >= report.expected_arrival_time - 0.005 * report.expected_arrival_time);
  CHECK(dp.cost <= report.expected_arrival_time * 1.03);

  // Greedy trace has the alpha -> EL -> 0 structure up to grid blur:
  // velocity climbs, then descends to a standstill before q.
  REQUIRE(!dp.trace.empty());
  double v_peak = 0.0, t_peak = 0.0;
  for (const auto& s : dp.trace)
    if (s.v > v_peak) {
      v_peak = s.v;
      t_peak = s.t;
    }
  CHECK(v_peak > p.v0 + 20.0);          // really accelerates
  CHECK(v_peak < p.v_max - 20.0);       // no v_max hold in this region
  const auto& last = dp.trace.back();
  CHECK(last.x == doctest::Approx(p.d).epsilon(0.02));
  double v_after_peak_min = 1e9;
  for (const auto& s : dp.trace)
    if (s.t > t_peak) v_after_peak_min = std::min(v_after_peak_min, s.v);
  CHECK(v_after_peak_min <= 1.0);  // standstill (up to grid blur) before q
}

TEST_CASE("dp_min_cost rejects an oversized grid") {
  const auto p = figure();
  DPGrid grid;
  grid.dt = 0.5;
  grid.dv = 0.01;
  grid.position_buckets = 500000;
  grid.memory_budget_bytes = 1ull << 20;
  CHECK_THROWS(dp_min_cost(p, grid));
}

TEST_CASE("sweep argmin sits on the figure's optimal switch velocity") {
  const auto p = figure();
  const PhasePattern family{{Phase::EL, Phase::Beta}, true};
  const auto sweep = sweep_switch_velocity(p, family, 401);
  REQUIRE(sweep.argmin_vc.has_value());
  const double step = (200.0 - 60.0) / 400.0;
  CHECK(std::abs(*sweep.argmin_vc - 86.94452141899788) <= step + 1e-12);

  // v_beta end is a local maximum: cost falls moving right.
  REQUIRE(sweep.points.size() == 401);
  REQUIRE(sweep.points[0].cost.has_value());
  REQUIRE(sweep.points[1].cost.has_value());
  CHECK(*sweep.points[0].cost > *sweep.points[1].cost);

  // argmin is no worse than both neighbours.
  std::size_t arg = 0;
  for (std::size_t i = 0; i < sweep.points.size(); ++i)
    if (sweep.points[i].cost &&
        *sweep.points[i].cost == sweep.argmin_cost)
      arg = i;
  if (arg > 0 && sweep.points[arg - 1].cost)
    CHECK(sweep.argmin_cost <= *sweep.points[arg - 1].cost);
  if (arg + 1 < sweep.points.size() && sweep.points[arg + 1].cost)
    CHECK(sweep.argmin_cost <= *sweep.points[arg + 1].cost);
}

TEST_CASE("sweep curve has no feasibility gaps for the figure instance") {
  const auto p = figure();
  const PhasePattern family{{Phase::EL, Phase::Beta}, true};
  const auto sweep = sweep_switch_velocity(p, family, 101);
  for (const auto& pt : sweep.points) CHECK(pt.cost.has_value());
}

TEST_CASE("zero-amplitude perturbation changes nothing") {
  const auto p = figure();
  const auto report = solve_exponential(p);
  const double base =
      perturbed_cost(report.trajectory, p, Bump{1.0, 2.0, 0.0}, Bump{5.0, 2.0, 0.0});
  const double again =
      perturbed_cost(report.trajectory, p, Bump{2.0, 3.0, 0.0}, Bump{9.0, 1.0, 0.0});
  CHECK(base == doctest::Approx(again).epsilon(1e-12));
  CHECK(base == doctest::Approx(report.expected_arrival_time).epsilon(1e-7));
}

TEST_CASE("bump primitives are consistent") {
  Bump b{2.0, 4.0, 3.0};
  CHECK(b.value(2.0) == 0.0);
  CHECK(b.value(6.0) == 0.0);
  CHECK(b.value(4.0) == doctest::Approx(3.0));
  CHECK(b.integral(6.0) == doctest::Approx(3.0 * 4.0 / 2.0).epsilon(1e-12));
  // slope is the derivative of value
  for (double t : {2.3, 3.1, 4.5, 5.7}) {
    const double h = 1e-7;
    const double fd = (b.value(t + h) - b.value(t - h)) / (2.0 * h);
    CHECK(b.slope(t) == doctest::Approx(fd).epsilon(1e-5));
  }
  // integral is the antiderivative of value
  for (double t : {2.5, 3.5, 5.0}) {
    const double h = 1e-6;
    const double fd = (b.integral(t + h) - b.integral(t - h)) / (2.0 * h);
    CHECK(b.value(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("perturbations never improve the exponential optimum") {
  const auto p = figure();
  const auto report = solve_exponential(p);
  const auto result = perturbation_test(report.trajectory, p, 300, 2024);
  CHECK(result.trials == 300);
  CHECK(result.min_delta >= -1e-7);
}

TEST_CASE("perturbations never improve the uniform optimum") {
  ProblemSpec p{6.0, 20.0, 200.0, 50.0, 2000.0, 20000.0,
                GreenDistribution::uniform(100.0)};
  const auto report = solve_uniform(p);
  const auto result = perturbation_test(report.trajectory, p, 200, 5);
  CHECK(result.trials == 200);
  CHECK(result.min_delta >= -1e-7);
}

TEST_CASE("a premature switch at v_beta is beaten by some perturbation") {
  // lambda = 0.3 separates the premature switch from the optimum clearly.
  ProblemSpec p{6.0, 20.0, 200.0, 200.0, 3000.0, 4000.0,
                GreenDistribution::exponential(0.3)};
  const auto bad = assemble_switch_trajectory(p, v_beta(p));
  REQUIRE(bad.has_value());
  CHECK(validate_trajectory(*bad).ok(p));
  const auto result = perturbation_test(*bad, p, 400, 31337);
  CHECK(result.min_delta < -1e-4);
}

TEST_CASE("assemble_switch_trajectory covers beta-led members") {
  // v0 above v_c with d close to the stopping minimum: brake first.
  ProblemSpec p{6.0, 20.0, 200.0, 180.0, 1100.0, 8000.0,
                GreenDistribution::exponential(0.1)};
  const auto traj = assemble_switch_trajectory(p, 90.0);
  REQUIRE(traj.has_value());
  CHECK(traj->segments().front().kind == SegmentKind::Beta);
  CHECK(validate_trajectory(*traj).ok(p));
}

TEST_CASE("infeasible switch candidates are reported absent") {
  // v0 far below v_c and d too small to even reach v_c.
  ProblemSpec p{6.0, 20.0, 200.0, 0.0, 50.0, 8000.0,
                GreenDistribution::exponential(0.1)};
  CHECK_FALSE(assemble_switch_trajectory(p, 150.0).has_value());
}
