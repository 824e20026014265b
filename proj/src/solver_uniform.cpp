#include "redlight/solver_uniform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "redlight/cost.hpp"

namespace redlight {

namespace {

ProblemSpec with_point(const ProblemSpec& base, double v0, double d) {
  ProblemSpec p = base;
  p.v0 = v0;
  p.d = d;
  p.L = std::max(p.L, d);
  return p;
}

void reject_if_invalid(const ProblemSpec& p) {
  const ValidationResult r = validate_problem(p);
  if (!r.ok()) {
    std::string msg = "solve_uniform: instance rejected:";
    for (const auto& reason : r.reasons) msg += " " + reason;
    throw std::invalid_argument(msg);
  }
}

std::vector<Transition> transitions_of(const Trajectory& traj) {
  std::vector<Transition> ts;
  const auto& segs = traj.segments();
  for (std::size_t i = 1; i < segs.size(); ++i)
    ts.push_back({segs[i].t_start, segs[i].v_start, segs[i].kind});
  return ts;
}

}  // namespace

UniformTank UniformTank::from_problem(const ProblemSpec& p) {
  UniformTank t;
  t.alpha = p.alpha;
  t.beta = p.beta;
  t.v0 = p.v0;
  t.v_max = p.v_max;
  t.q = p.dist.q_support();
  t.t1 = p.v0 / p.beta;
  t.t2 = p.v0 / p.alpha;
  t.t3 = (p.v_max - p.v0) / p.alpha;
  t.t4 = t.t3 + p.v_max / p.alpha;
  return t;
}

double UniformTank::surface(double c, double t) const {
  const double lower = std::max(0.0, v0 - beta * t);
  const double upper = std::min(v0 + alpha * t, v_max);
  return std::max(lower, std::min(upper, c - alpha * t));
}

double tank_area_at_level(const UniformTank& tank, double c) {
  // The surface is piecewise linear; kinks can only sit where two of the
  // bounding lines intersect. Collect those points and sum exact trapezoids.
  std::vector<double> pts = {0.0, tank.q, tank.t1, tank.t3};
  pts.push_back(c / tank.alpha);                       // level meets v = 0
  pts.push_back((c - tank.v_max) / tank.alpha);        // level meets v_max
  pts.push_back((c - tank.v0) / (2.0 * tank.alpha));   // level meets alpha ramp
  if (tank.beta > tank.alpha)
    pts.push_back((tank.v0 - c) / (tank.beta - tank.alpha));  // level meets beta ramp
  std::vector<double> cuts;
  for (double t : pts)
    if (t >= 0.0 && t <= tank.q) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double area = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    area += 0.5 * (b - a) * (tank.surface(c, a) + tank.surface(c, b));
  }
  return area;
}

SolveReport solve_uniform(const ProblemSpec& p) {
  if (p.dist.kind() != GreenDistribution::Kind::Uniform)
    throw std::invalid_argument("solve_uniform: distribution must be Uniform");
  reject_if_invalid(p);

  const UniformTank tank = UniformTank::from_problem(p);
  const double q = tank.q;

  // Monotone area(c); bracket guaranteed on [0, v_max + alpha q].
  double lo = 0.0;
  double hi = p.v_max + p.alpha * q;
  const double tol = 1e-9 * std::max(1.0, p.d);
  double c = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    c = 0.5 * (lo + hi);
    const double area = tank_area_at_level(tank, c);
    if (std::abs(area - p.d) <= tol) break;
    if (area < p.d)
      lo = c;
    else
      hi = c;
  }

  // Extract the surface as segments.
  std::vector<Segment> segs;
  double t_el = 0.0;  // time the surface joins the level line
  bool has_el = true;
  if (c <= tank.alpha * tank.v0 / tank.beta) {
    // Level never rises above the braking ramp: hardest stop is the answer.
    segs.push_back({SegmentKind::Beta, 0.0, std::min(tank.t1, q), p.v0});
    has_el = false;
    t_el = std::min(tank.t1, q);
  } else if (c < p.v0) {
    const double t_b = (p.v0 - c) / (p.beta - p.alpha);
    segs.push_back({SegmentKind::Beta, 0.0, t_b, p.v0});
    t_el = t_b;
  } else if (c <= 2.0 * p.v_max - p.v0) {
    const double t_a = std::min((c - p.v0) / (2.0 * p.alpha), q);
    segs.push_back({SegmentKind::Alpha, 0.0, t_a, p.v0});
    t_el = t_a;
  } else {
    const double t_a = std::min(tank.t3, q);
    segs.push_back({SegmentKind::Alpha, 0.0, t_a, p.v0});
    const double t_exit = std::min((c - p.v_max) / p.alpha, q);
    if (t_exit > t_a)
      segs.push_back({SegmentKind::VMaxHold, t_a, t_exit - t_a, p.v_max});
    t_el = t_exit;
  }
  if (has_el && t_el < q) {
    const double v_el = c - p.alpha * t_el;
    const double t_zero = t_el + v_el / p.alpha;
    if (t_zero <= q) {
      segs.push_back({SegmentKind::EulerLagrange, t_el, v_el / p.alpha, v_el});
      if (q > t_zero)
        segs.push_back({SegmentKind::ZeroHold, t_zero, q - t_zero, 0.0});
    } else {
      segs.push_back({SegmentKind::EulerLagrange, t_el, q - t_el, v_el});
    }
  } else if (!has_el && t_el < q) {
    segs.push_back({SegmentKind::ZeroHold, t_el, q - t_el, 0.0});
  }

  Trajectory traj(normalize_segments(std::move(segs), p), p);
  const TrajectoryCheck check = validate_trajectory(traj);

  SolveReport report(traj.pattern(), traj, transitions_of(traj),
                     expected_arrival(traj, p));
  report.fill_level = c;
  report.distance_residual = check.distance_residual;
  report.lipschitz_violation = check.lipschitz_violation;
  return report;
}

PhasePattern uniform_phase_region(const ProblemSpec& base, double v0,
                                  double d) {
  const ProblemSpec p = with_point(base, v0, d);
  const ValidationResult vr = validate_problem(p);
  if (!vr.feasible)
    throw std::invalid_argument("uniform_phase_region: infeasible point");
  if (vr.trivial)
    throw std::invalid_argument("uniform_phase_region: trivial point");

  const UniformTank tank = UniformTank::from_problem(p);
  const double q = tank.q;
  if (p.alpha * q < 2.0 * p.v_max - v0) {
    // Short tank: wall ordering differs, fall back to the generic fill.
    return solve_uniform(p).pattern;
  }

  const double a1 = v0 * v0 / (2.0 * p.beta);
  const double a2 = v0 * v0 / (2.0 * p.alpha);
  const double a3 = p.v_max * p.v_max / p.alpha - v0 * v0 / (2.0 * p.alpha);
  const double d_full = (p.v_max * p.v_max - v0 * v0) / (2.0 * p.alpha) +
                        p.v_max * (q - tank.t3);
  const double a4 = d_full - p.v_max * p.v_max / (2.0 * p.alpha);
  const double rel = 1e-12 * std::max(1.0, d);
  const bool at_vmax = v0 >= p.v_max * (1.0 - 1e-12);

  PhasePattern pat;
  if (std::abs(d - a1) <= rel) {
    pat.sequence = {Phase::Beta};
    pat.trailing_zero = tank.t1 < q;
  } else if (d < a2 - rel) {
    pat.sequence = {Phase::Beta, Phase::EL};
    pat.trailing_zero = true;
  } else if (std::abs(d - a2) <= rel) {
    pat.sequence = {Phase::EL};
    pat.trailing_zero = true;
  } else if (d < a3 - rel && !at_vmax) {
    pat.sequence = {Phase::Alpha, Phase::EL};
    pat.trailing_zero = true;
  } else if (d <= a4 + rel) {
    pat.sequence = at_vmax
                       ? std::vector<Phase>{Phase::VMax, Phase::EL}
                       : std::vector<Phase>{Phase::Alpha, Phase::VMax, Phase::EL};
    pat.trailing_zero = d < a4 - rel;
  } else {
    pat.sequence = at_vmax
                       ? std::vector<Phase>{Phase::VMax, Phase::EL}
                       : std::vector<Phase>{Phase::Alpha, Phase::VMax, Phase::EL};
    pat.trailing_zero = false;
  }
  return pat;
}

}  // namespace redlight
