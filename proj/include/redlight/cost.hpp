#pragma once

#include <cstdint>

#include "redlight/distributions.hpp"
#include "redlight/kinematics.hpp"

namespace redlight {

// Time still needed once the light is green at position x, speed v:
// accelerate at alpha to v_max, then cruise to the destination:
//   k(x, v) = (v_max - v)^2 / (2 alpha v_max) + (L - x) / v_max.
double k_remainder(double x, double v, const ProblemSpec& p);

// Expected arrival time of a valid trajectory:
//   E[T + k(x(T), v(T))] = int_0^q [t + k(x(t), v(t))] f(t) dt.
// Quadrature is split at every segment boundary. For an Exponential law with
// a terminal standstill at t_s the tail integral is closed form:
//   e^{-lambda t_s} (t_s + 1/lambda + k(d, 0)).
// Throws if the trajectory fails the kinematics invariants.
double expected_arrival(const Trajectory& traj, const ProblemSpec& p);

struct McEstimate {
  double mean;
  double std_error;
};

// Same expectation by inverse-CDF sampling of T; deterministic per seed.
McEstimate expected_arrival_mc(const Trajectory& traj, const ProblemSpec& p,
                               std::int64_t n, std::uint64_t seed);

// Pressure P_B(t, C) = -(v_max - C) f(t) + alpha F(t) + B. EL curves are its
// isobars; B is the Lagrange-multiplier offset of the distance constraint.
struct PressureField {
  double B;
  GreenDistribution dist;
  double alpha;
  double v_max;

  double pressure(double t, double C) const;
};

// The action in pressure form, int_0^q int_0^{v(t)} P_B(t, C) dC dt, by
// nested quadrature over [0, horizon]. Differences of this value rank
// trajectories with equal distance identically to expected_arrival.
double pressure_action(const Trajectory& traj, const PressureField& pf);

}  // namespace redlight
