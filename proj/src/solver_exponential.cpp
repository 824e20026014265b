#include "redlight/solver_exponential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "redlight/cost.hpp"
#include "redlight/euler_lagrange.hpp"
#include "redlight/root_find.hpp"

namespace redlight {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_exponential(const ProblemSpec& p, const char* who) {
  if (p.dist.kind() != GreenDistribution::Kind::Exponential)
    throw std::invalid_argument(std::string(who) + ": distribution must be Exponential");
}

void reject_if_invalid(const ProblemSpec& p) {
  const ValidationResult r = validate_problem(p);
  if (!r.ok()) {
    std::string msg = "solve_exponential: instance rejected:";
    for (const auto& reason : r.reasons) msg += " " + reason;
    throw std::invalid_argument(msg);
  }
}

// Time to descend an EL curve from v_hi to v_lo.
double el_duration(double v_hi, double v_lo, double lambda, double A) {
  return std::log((A - v_lo) / (A - v_hi)) / lambda;
}

std::vector<Transition> transitions_of(const Trajectory& traj) {
  std::vector<Transition> ts;
  const auto& segs = traj.segments();
  for (std::size_t i = 1; i < segs.size(); ++i)
    ts.push_back({segs[i].t_start, segs[i].v_start, segs[i].kind});
  return ts;
}

}  // namespace

double f_of_vc(double v_c, const ProblemSpec& p) {
  require_exponential(p, "f_of_vc");
  const double lam = p.dist.lambda();
  const double A = p.v_max + p.alpha / lam;
  const double gamma = p.beta + lam * A;
  return -(lam * lam / p.beta) * v_c * v_c + (lam / p.beta) * gamma * v_c +
         std::expm1(-lam * v_c / p.beta) * gamma;
}

double vc_prime(double v_c, const ProblemSpec& p) {
  require_exponential(p, "vc_prime");
  const double lam = p.dist.lambda();
  const double A = p.v_max + p.alpha / lam;
  return -lam * p.beta * p.v_max * (A - v_c) /
         (p.beta * (p.v_max - v_c) + lam * (A - v_c) * v_c);
}

ExpSolverState solve_vc_star(const ProblemSpec& p) {
  require_exponential(p, "solve_vc_star");
  ExpSolverState st;
  const double lam = p.dist.lambda();
  st.A = p.v_max + p.alpha / lam;
  st.v_beta = p.v_max + (p.alpha - p.beta) / lam;
  if (st.v_beta <= 0.0) return st;  // no EL -> beta switch exists

  // F(v_beta) > 0 and F -> -infinity, so a geometric expansion brackets the
  // unique positive root.
  const double lo = st.v_beta;
  double hi = std::max(2.0 * st.v_beta, p.v_max);
  const double cap = 1e6 * p.v_max;
  while (f_of_vc(hi, p) >= 0.0) {
    hi *= 2.0;
    if (hi > cap)
      throw std::runtime_error("solve_vc_star: no sign change below 1e6 v_max");
  }
  const double root = solve_bracketed(
      [&](double v) { return f_of_vc(v, p); }, lo, hi, 1e-12);
  st.v_c_star = root;
  st.exceeds_vmax = root >= p.v_max;
  st.root_residual = std::abs(f_of_vc(root, p));
  return st;
}

PhasePattern classify_region(double v0, double d, const ExpSolverState& st,
                             const ProblemSpec& p) {
  require_exponential(p, "classify_region");
  const double lam = p.dist.lambda();
  const double A = st.A;
  const double rel = 1e-12 * std::max(1.0, d);
  const bool at_vmax = v0 >= p.v_max * (1.0 - 1e-12);

  const double b1 = v0 * v0 / (2.0 * p.beta);
  if (d < b1 - rel)
    throw std::invalid_argument("classify_region: below the stopping boundary");

  PhasePattern pat;
  pat.trailing_zero = true;  // q = infinity: every optimum ends at rest

  if (std::abs(d - b1) <= rel) {
    pat.sequence = {Phase::Beta};
    return pat;
  }

  if (st.v_beta <= 0.0) {
    // EL curves never out-brake the car; trajectories end on an EL descent.
    const double b_el = el_distance(v0, 0.0, lam, A);
    const double b3 = (p.v_max * p.v_max - v0 * v0) / (2.0 * p.alpha) +
                      el_distance(p.v_max, 0.0, lam, A);
    if (d < b_el - rel)
      pat.sequence = {Phase::Beta, Phase::EL};
    else if (std::abs(d - b_el) <= rel)
      pat.sequence = {Phase::EL};
    else if (d <= b3 + rel && !at_vmax)
      pat.sequence = {Phase::Alpha, Phase::EL};
    else if (at_vmax)
      pat.sequence = {Phase::VMax, Phase::EL};
    else
      pat.sequence = {Phase::Alpha, Phase::VMax, Phase::EL};
    return pat;
  }

  if (st.exceeds_vmax || !st.v_c_star) {
    // No EL phase is ever optimal.
    const double b2 = p.v_max * p.v_max *
                          (1.0 / (2.0 * p.alpha) + 1.0 / (2.0 * p.beta)) -
                      v0 * v0 / (2.0 * p.alpha);
    if (d <= b2 + rel && !at_vmax)
      pat.sequence = {Phase::Alpha, Phase::Beta};
    else if (at_vmax)
      pat.sequence = {Phase::VMax, Phase::Beta};
    else
      pat.sequence = {Phase::Alpha, Phase::VMax, Phase::Beta};
    return pat;
  }

  const double vc = *st.v_c_star;
  const double b3 = (p.v_max * p.v_max - v0 * v0) / (2.0 * p.alpha) +
                    el_distance(p.v_max, vc, lam, A) +
                    vc * vc / (2.0 * p.beta);
  if (v0 < vc) {
    const double b2 =
        vc * vc * (1.0 / (2.0 * p.beta) + 1.0 / (2.0 * p.alpha)) -
        v0 * v0 / (2.0 * p.alpha);
    if (d <= b2 + rel)
      pat.sequence = {Phase::Alpha, Phase::Beta};
    else if (d <= b3 + rel)
      pat.sequence = {Phase::Alpha, Phase::EL, Phase::Beta};
    else
      pat.sequence = {Phase::Alpha, Phase::VMax, Phase::EL, Phase::Beta};
    return pat;
  }

  const double b4 = el_distance(v0, vc, lam, A) + vc * vc / (2.0 * p.beta);
  if (d < b4 - rel)
    pat.sequence = {Phase::Beta, Phase::EL, Phase::Beta};
  else if (std::abs(d - b4) <= rel)
    pat.sequence = {Phase::EL, Phase::Beta};
  else if (d <= b3 + rel && !at_vmax)
    pat.sequence = {Phase::Alpha, Phase::EL, Phase::Beta};
  else if (at_vmax)
    pat.sequence = {Phase::VMax, Phase::EL, Phase::Beta};
  else
    pat.sequence = {Phase::Alpha, Phase::VMax, Phase::EL, Phase::Beta};
  return pat;
}

SolveReport solve_exponential(const ProblemSpec& p) {
  require_exponential(p, "solve_exponential");
  reject_if_invalid(p);

  const double lam = p.dist.lambda();
  const ExpSolverState st = solve_vc_star(p);
  const double A = st.A;
  const PhasePattern region = classify_region(p.v0, p.d, st, p);

  const auto& seq = region.sequence;
  auto is = [&](std::initializer_list<Phase> phases) {
    return seq == std::vector<Phase>(phases);
  };

  std::vector<Segment> segs;
  auto push = [&](SegmentKind kind, double duration, double v_from) {
    segs.push_back({kind, 0.0, duration, v_from});
  };
  const double vc = st.v_c_star.value_or(0.0);
  std::optional<double> peak;

  using P = Phase;
  if (is({P::Beta})) {
    push(SegmentKind::Beta, p.v0 / p.beta, p.v0);
  } else if (is({P::Alpha, P::Beta})) {
    const double v_p = std::sqrt((p.d + p.v0 * p.v0 / (2.0 * p.alpha)) /
                                 (0.5 / p.alpha + 0.5 / p.beta));
    peak = v_p;
    push(SegmentKind::Alpha, (v_p - p.v0) / p.alpha, p.v0);
    push(SegmentKind::Beta, v_p / p.beta, v_p);
  } else if (is({P::Alpha, P::VMax, P::Beta}) || is({P::VMax, P::Beta})) {
    const double base = (p.v_max * p.v_max - p.v0 * p.v0) / (2.0 * p.alpha) +
                        p.v_max * p.v_max / (2.0 * p.beta);
    const double hold = std::max(0.0, (p.d - base) / p.v_max);
    peak = p.v_max;
    push(SegmentKind::Alpha, (p.v_max - p.v0) / p.alpha, p.v0);
    push(SegmentKind::VMaxHold, hold, p.v_max);
    push(SegmentKind::Beta, p.v_max / p.beta, p.v_max);
  } else if (is({P::Alpha, P::EL, P::Beta}) || is({P::EL, P::Beta})) {
    const double lo = std::max(p.v0, vc);
    const double v_a =
        is({P::EL, P::Beta})
            ? p.v0  // boundary case: the EL curve through v0 already fits d
            : solve_monotone(
                  [&](double v) {
                    return (v * v - p.v0 * p.v0) / (2.0 * p.alpha) +
                           el_distance(v, vc, lam, A) +
                           vc * vc / (2.0 * p.beta);
                  },
                  lo, p.v_max, p.d);
    peak = v_a;
    push(SegmentKind::Alpha, (v_a - p.v0) / p.alpha, p.v0);
    push(SegmentKind::EulerLagrange, el_duration(v_a, vc, lam, A), v_a);
    push(SegmentKind::Beta, vc / p.beta, vc);
  } else if (is({P::Alpha, P::VMax, P::EL, P::Beta}) ||
             is({P::VMax, P::EL, P::Beta})) {
    const double base = (p.v_max * p.v_max - p.v0 * p.v0) / (2.0 * p.alpha) +
                        el_distance(p.v_max, vc, lam, A) +
                        vc * vc / (2.0 * p.beta);
    const double hold = std::max(0.0, (p.d - base) / p.v_max);
    peak = p.v_max;
    push(SegmentKind::Alpha, (p.v_max - p.v0) / p.alpha, p.v0);
    push(SegmentKind::VMaxHold, hold, p.v_max);
    push(SegmentKind::EulerLagrange, el_duration(p.v_max, vc, lam, A), p.v_max);
    push(SegmentKind::Beta, vc / p.beta, vc);
  } else if (is({P::Beta, P::EL, P::Beta})) {
    const double v_b = solve_monotone(
        [&](double v) {
          return (p.v0 * p.v0 - v * v) / (2.0 * p.beta) +
                 el_distance(v, vc, lam, A) + vc * vc / (2.0 * p.beta);
        },
        vc, p.v0, p.d);
    push(SegmentKind::Beta, (p.v0 - v_b) / p.beta, p.v0);
    push(SegmentKind::EulerLagrange, el_duration(v_b, vc, lam, A), v_b);
    push(SegmentKind::Beta, vc / p.beta, vc);
  } else if (is({P::Beta, P::EL}) || is({P::EL})) {
    const double v_b =
        is({P::EL}) ? p.v0
                    : solve_monotone(
                          [&](double v) {
                            return (p.v0 * p.v0 - v * v) / (2.0 * p.beta) +
                                   el_distance(v, 0.0, lam, A);
                          },
                          0.0, p.v0, p.d);
    push(SegmentKind::Beta, (p.v0 - v_b) / p.beta, p.v0);
    push(SegmentKind::EulerLagrange, el_duration(v_b, 0.0, lam, A), v_b);
  } else if (is({P::Alpha, P::EL})) {
    const double v_a = solve_monotone(
        [&](double v) {
          return (v * v - p.v0 * p.v0) / (2.0 * p.alpha) +
                 el_distance(v, 0.0, lam, A);
        },
        p.v0, p.v_max, p.d);
    peak = v_a;
    push(SegmentKind::Alpha, (v_a - p.v0) / p.alpha, p.v0);
    push(SegmentKind::EulerLagrange, el_duration(v_a, 0.0, lam, A), v_a);
  } else if (is({P::Alpha, P::VMax, P::EL}) || is({P::VMax, P::EL})) {
    const double base = (p.v_max * p.v_max - p.v0 * p.v0) / (2.0 * p.alpha) +
                        el_distance(p.v_max, 0.0, lam, A);
    const double hold = std::max(0.0, (p.d - base) / p.v_max);
    peak = p.v_max;
    push(SegmentKind::Alpha, (p.v_max - p.v0) / p.alpha, p.v0);
    push(SegmentKind::VMaxHold, hold, p.v_max);
    push(SegmentKind::EulerLagrange, el_duration(p.v_max, 0.0, lam, A), p.v_max);
  } else {
    throw std::logic_error("solve_exponential: unhandled region " + region.name());
  }
  push(SegmentKind::ZeroHold, kInf, 0.0);

  Trajectory traj(normalize_segments(std::move(segs), p), p);
  const TrajectoryCheck check = validate_trajectory(traj);

  SolveReport report(traj.pattern(), traj, transitions_of(traj),
                     expected_arrival(traj, p));
  report.v_c_star = st.v_c_star;
  report.vc_exceeds_vmax = st.exceeds_vmax;
  report.v_beta_value = st.v_beta;
  report.el_asymptote = A;
  report.peak_velocity = peak;
  report.root_residual = st.v_c_star ? std::optional<double>(st.root_residual)
                                     : std::nullopt;
  for (const auto& s : traj.segments()) {
    if (s.kind == SegmentKind::EulerLagrange && !report.t_el_start)
      report.t_el_start = s.t_start;
    if (s.kind == SegmentKind::Beta && report.t_el_start && !report.t_brake)
      report.t_brake = s.t_start;
  }
  report.distance_residual = check.distance_residual;
  report.lipschitz_violation = check.lipschitz_violation;
  return report;
}

}  // namespace redlight
