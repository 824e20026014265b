#pragma once

#include "redlight/solve_report.hpp"

namespace redlight {

// Tank geometry for T ~ Uniform(0, q). Level lines of the fill have slope
// -alpha; the walls are the braking ramp below v0, the acceleration ramp
// above it, the speed limit on top, v = 0 below and t = q on the right.
struct UniformTank {
  double alpha, beta, v0, v_max, q;
  double t1;  // v0 / beta       (hardest stop)
  double t2;  // v0 / alpha      (EL descent from v0 to rest)
  double t3;  // (v_max - v0) / alpha
  double t4;  // t3 + v_max / alpha

  static UniformTank from_problem(const ProblemSpec& p);

  // Velocity of the water surface for level intercept c at time t:
  //   max(lower wall, min(upper wall, c - alpha t)).
  double surface(double c, double t) const;
};

// Area under the surface for level intercept c: the distance a car travels
// up to time q when riding that fill level. Closed form via the breakpoints
// where the level line meets each wall; monotone and continuous in c.
double tank_area_at_level(const UniformTank& tank, double c);

// Bisection on the fill level until the area matches d, then extraction of
// the surface as a segment chain. Rejects infeasible or trivial instances.
SolveReport solve_uniform(const ProblemSpec& p);

// Phase label for the point (v0, d) with the remaining parameters taken from
// base. Uses the closed-form region boundaries when the wall ordering
// t1 <= t2, t3 <= t4 <= q applies, and the generic fill otherwise.
PhasePattern uniform_phase_region(const ProblemSpec& base, double v0,
                                  double d);

}  // namespace redlight
