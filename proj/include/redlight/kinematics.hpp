#pragma once

#include <limits>
#include <string>
#include <vector>

#include "redlight/distributions.hpp"

namespace redlight {

// Full problem instance: car limits, initial state, light distance, the
// destination distance beyond the light, and the law of the remaining red
// time. Time is measured from first sighting (x(0) = 0, v(0) = v0).
struct ProblemSpec {
  double alpha;   // max acceleration, > 0
  double beta;    // max braking, > 0
  double v_max;   // speed limit, > 0
  double v0;      // initial speed, in [0, v_max]
  double d;       // distance to the light, > 0
  double L;       // distance to the destination, >= v_max^2 / (2 alpha)
  GreenDistribution dist;
};

enum class SegmentKind { Alpha, Beta, VMaxHold, ZeroHold, EulerLagrange };

// One closed-form piece of a velocity profile. The curve through
// (t_start, v_start) is determined by the kind together with the problem
// parameters; EulerLagrange pieces follow the isobar of the problem's
// distribution that passes through the segment start.
struct Segment {
  SegmentKind kind;
  double t_start;
  double duration;  // +infinity only for a terminal ZeroHold / VMaxHold
  double v_start;

  bool infinite() const {
    return duration == std::numeric_limits<double>::infinity();
  }
};

enum class Phase { Alpha, Beta, EL, VMax, Zero };

// Ordered phase labels of a trajectory, with the optional trailing
// standstill carried as a flag. name() renders e.g. "alpha-EL-beta-0".
struct PhasePattern {
  std::vector<Phase> sequence;
  bool trailing_zero = false;

  std::string name() const;
  bool operator==(const PhasePattern&) const = default;
};

// Is this one of the admissible phase orders? Boxed orders (those requiring
// the EL slope to pass -beta) are admitted only when boxed_allowed.
bool pattern_admissible(const PhasePattern& p, bool boxed_allowed);

class Trajectory {
 public:
  Trajectory(std::vector<Segment> segments, ProblemSpec problem);

  const std::vector<Segment>& segments() const { return segments_; }
  const ProblemSpec& problem() const { return problem_; }

  double velocity_at(double t) const;
  double position_at(double t) const;

  // End of the last finite segment.
  double end_time() const { return end_time_; }
  // First time the profile reaches velocity 0 and stays there, or end_time().
  double stop_time() const;

  PhasePattern pattern() const;

 private:
  const Segment& segment_at(double t) const;
  double segment_velocity(const Segment& s, double t) const;
  double segment_position(const Segment& s, double t) const;  // from s.t_start

  std::vector<Segment> segments_;
  ProblemSpec problem_;
  std::vector<double> x_start_;  // cumulative position at segment starts
  double end_time_;
  double end_velocity_;
  double end_position_;
};

double segment_end_velocity(const Segment& s, const ProblemSpec& p);

// Drops zero-length segments (duration < 1e-12) and rebases start times and
// velocities so the chain is exactly continuous.
std::vector<Segment> normalize_segments(std::vector<Segment> segments,
                                        const ProblemSpec& p);

struct ValidationResult {
  bool feasible = true;
  bool trivial = false;
  std::vector<std::string> reasons;
  bool ok() const { return feasible && !trivial && reasons.empty(); }
};

// Stopping feasibility, the non-triviality condition for finite q, basic
// parameter sanity, and (Uniform only) the braking-weaker-than-EL rejection.
ValidationResult validate_problem(const ProblemSpec& p);

// Max positive part of (dv/dt - alpha) and (-beta - dv/dt) over consecutive
// sampled pairs; 0 for profiles inside the Lipschitz cone.
double check_lipschitz(const Trajectory& traj, int samples);

struct TrajectoryCheck {
  double max_continuity_gap = 0.0;
  double max_bound_violation = 0.0;
  double lipschitz_violation = 0.0;
  double distance_residual = 0.0;  // |x(end) - d|
  bool ok(const ProblemSpec& p) const;
};

// Analytic audit of solver invariants: continuity at joints, 0 <= v <= v_max,
// per-segment slope bounds, and the distance constraint at q (finite support)
// or at the stop time (unbounded support).
TrajectoryCheck validate_trajectory(const Trajectory& traj);

}  // namespace redlight
