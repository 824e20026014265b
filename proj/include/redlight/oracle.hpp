#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "redlight/kinematics.hpp"

namespace redlight {

// Backward-induction grid over (time, velocity, position bucket). Velocity
// transitions use the listed accelerations, clamped so every discrete step
// stays inside the (alpha,beta)-Lipschitz cone. Position is tracked in
// buckets over [0, d] with linear value interpolation between neighbours.
struct DPGrid {
  double dt = 0.0;                    // required
  double dv = 0.0;                    // required
  double horizon = 0.0;               // 0: min(q, 1-F < 1e-9 point) + stop time
  std::vector<double> accel_choices;  // empty: {-beta, 0, alpha}
  int position_buckets = 512;
  std::uint64_t memory_budget_bytes = 1ull << 29;
};

struct DPResult {
  double cost = 0.0;
  struct Sample {
    double t, v, x, a;
  };
  std::vector<Sample> trace;  // greedy rollout from the initial state
};

// Minimal discretized expected arrival over grid policies. Approaches the
// solver cost from above as (dt, dv) shrink.
DPResult dp_min_cost(const ProblemSpec& p, const DPGrid& grid);

// Family trajectory that rides an EL descent onto a full-braking stop at the
// switch velocity v_c (instead of the optimal v_c*), with the leading phases
// chosen to meet the distance constraint. Returns nothing when no member of
// the family fits the instance.
std::optional<Trajectory> assemble_switch_trajectory(const ProblemSpec& p,
                                                     double v_c);

struct SweepPoint {
  double v_c;
  std::optional<double> cost;  // absent when the candidate is infeasible
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::optional<double> argmin_vc;
  double argmin_cost = 0.0;
};

// Cost of the switch family across grid_points values of v_c in
// [v_beta, v_max]. The family must contain an EL -> beta switch.
SweepResult sweep_switch_velocity(const ProblemSpec& p,
                                  const PhasePattern& family, int grid_points);

// C1 piecewise-quadratic bump of the given height on [t0, t0 + width];
// integral = height * width / 2, slope bounded by 4 height / width.
struct Bump {
  double t0 = 0.0;
  double width = 1.0;
  double height = 0.0;

  double value(double t) const;
  double slope(double t) const;
  double integral(double t) const;  // int_{t0}^{t} of value
};

// Expected arrival of the trajectory perturbed by add and remove (the pair
// must preserve the integral; callers scale remove.height accordingly).
// Evaluated with the same quadrature for the base and perturbed profile so
// cost differences are reliable near 1e-9.
double perturbed_cost(const Trajectory& traj, const ProblemSpec& p,
                      const Bump& add, const Bump& remove);

struct PerturbationResult {
  double min_delta = 0.0;
  double base_cost = 0.0;
  int trials = 0;
  Bump worst_add;
  Bump worst_remove;
};

// n random integral-preserving bump pairs, each projected into the feasible
// cone by rejection; returns the most favourable cost change. Negative
// deltas past tolerance certify non-optimality.
PerturbationResult perturbation_test(const Trajectory& traj,
                                     const ProblemSpec& p, int n,
                                     std::uint64_t seed);

// Independent expectation integrator for arbitrary profiles (DP traces,
// hand-made controls): v and x as callables on [0, t_end], standstill at
// x(t_end) afterwards when the support is unbounded.
double expectation_of_profile(const ProblemSpec& p,
                              const std::function<double(double)>& v,
                              const std::function<double(double)>& x,
                              double t_end,
                              std::vector<double> breakpoints);

}  // namespace redlight
