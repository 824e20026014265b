#pragma once

#include <optional>
#include <vector>

#include "redlight/kinematics.hpp"

namespace redlight {

struct Transition {
  double t;
  double v;
  SegmentKind into;
};

// Output of either solver: the chosen pattern, the trajectory, the phase
// transitions, the expected arrival time, and solver diagnostics.
struct SolveReport {
  SolveReport(PhasePattern pat, Trajectory traj, std::vector<Transition> ts,
              double arrival)
      : pattern(std::move(pat)),
        trajectory(std::move(traj)),
        transitions(std::move(ts)),
        expected_arrival_time(arrival) {}

  PhasePattern pattern;
  Trajectory trajectory;
  std::vector<Transition> transitions;
  double expected_arrival_time = 0.0;

  // Exponential diagnostics.
  std::optional<double> v_c_star;   // stored even when it exceeds v_max
  bool vc_exceeds_vmax = false;
  std::optional<double> v_beta_value;
  std::optional<double> el_asymptote;  // A
  std::optional<double> peak_velocity; // v_a (or alpha-beta peak)
  std::optional<double> t_el_start;    // t_0
  std::optional<double> t_brake;       // t_c
  std::optional<double> root_residual;

  // Uniform diagnostics.
  std::optional<double> fill_level;  // level-line intercept c

  double distance_residual = 0.0;
  double lipschitz_violation = 0.0;
};

}  // namespace redlight
