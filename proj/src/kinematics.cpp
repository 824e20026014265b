#include "redlight/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace redlight {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDropDuration = 1e-12;

// Exponential EL asymptote A = v_max + alpha/lambda.
double el_asymptote(const ProblemSpec& p) {
  return p.v_max + p.alpha / p.dist.lambda();
}
}  // namespace

std::string PhasePattern::name() const {
  std::string out;
  for (Phase ph : sequence) {
    if (!out.empty()) out += '-';
    switch (ph) {
      case Phase::Alpha: out += "alpha"; break;
      case Phase::Beta: out += "beta"; break;
      case Phase::EL: out += "EL"; break;
      case Phase::VMax: out += "vmax"; break;
      case Phase::Zero: out += "0"; break;
    }
  }
  if (trailing_zero) out += out.empty() ? "0" : "-0";
  if (out.empty()) out = "empty";
  return out;
}

bool pattern_admissible(const PhasePattern& p, bool boxed_allowed) {
  using P = Phase;
  static const std::vector<std::pair<std::vector<P>, bool>> orders = {
      {{P::Alpha}, false},
      {{P::Alpha, P::Beta}, true},
      {{P::Alpha, P::EL, P::Beta}, true},
      {{P::Alpha, P::VMax, P::EL, P::Beta}, true},
      {{P::Alpha, P::EL}, false},
      {{P::Alpha, P::VMax, P::EL}, false},
      {{P::Alpha, P::VMax, P::Beta}, true},
      {{P::Alpha, P::VMax}, false},
      {{P::Beta}, false},
      {{P::Beta, P::EL, P::Beta}, true},
      {{P::Beta, P::EL}, false},
      {{P::VMax, P::EL, P::Beta}, true},
      {{P::VMax, P::EL}, false},
      {{P::VMax, P::Beta}, true},
      {{P::VMax}, false},
      {{P::EL, P::Beta}, true},
      {{P::EL}, false},
  };
  for (const auto& [seq, boxed] : orders) {
    if (seq == p.sequence) return boxed_allowed || !boxed;
  }
  return false;
}

double segment_end_velocity(const Segment& s, const ProblemSpec& p) {
  if (s.infinite()) return s.v_start;
  switch (s.kind) {
    case SegmentKind::Alpha:
      return s.v_start + p.alpha * s.duration;
    case SegmentKind::Beta:
      return s.v_start - p.beta * s.duration;
    case SegmentKind::VMaxHold:
    case SegmentKind::ZeroHold:
      return s.v_start;
    case SegmentKind::EulerLagrange: {
      if (p.dist.kind() == GreenDistribution::Kind::Uniform)
        return s.v_start - p.alpha * s.duration;
      const double A = el_asymptote(p);
      return A - (A - s.v_start) * std::exp(p.dist.lambda() * s.duration);
    }
  }
  return s.v_start;
}

std::vector<Segment> normalize_segments(std::vector<Segment> segments,
                                        const ProblemSpec& p) {
  std::vector<Segment> out;
  double t = 0.0;
  double v = segments.empty() ? p.v0 : segments.front().v_start;
  for (auto& s : segments) {
    if (!s.infinite() && s.duration < kDropDuration) continue;
    s.t_start = t;
    if (s.kind == SegmentKind::ZeroHold && std::abs(v) < 1e-9) v = 0.0;
    s.v_start = v;
    v = segment_end_velocity(s, p);
    if (!s.infinite()) t += s.duration;
    out.push_back(s);
    if (s.infinite()) break;
  }
  return out;
}

Trajectory::Trajectory(std::vector<Segment> segments, ProblemSpec problem)
    : segments_(std::move(segments)), problem_(std::move(problem)) {
  if (segments_.empty())
    throw std::invalid_argument("Trajectory: needs at least one segment");
  if (problem_.dist.kind() == GreenDistribution::Kind::Excess) {
    for (const auto& s : segments_)
      if (s.kind == SegmentKind::EulerLagrange)
        throw std::invalid_argument(
            "Trajectory: EL segments need a Uniform or Exponential law");
  }
  x_start_.resize(segments_.size());
  double x = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    x_start_[i] = x;
    const Segment& s = segments_[i];
    if (!s.infinite()) x += segment_position(s, s.t_start + s.duration);
  }
  const Segment& last = segments_.back();
  end_time_ = last.infinite() ? last.t_start : last.t_start + last.duration;
  end_velocity_ = segment_end_velocity(last, problem_);
  end_position_ = x;
}

double Trajectory::segment_velocity(const Segment& s, double t) const {
  const double tau = t - s.t_start;
  switch (s.kind) {
    case SegmentKind::Alpha:
      return s.v_start + problem_.alpha * tau;
    case SegmentKind::Beta:
      return s.v_start - problem_.beta * tau;
    case SegmentKind::VMaxHold:
    case SegmentKind::ZeroHold:
      return s.v_start;
    case SegmentKind::EulerLagrange: {
      if (problem_.dist.kind() == GreenDistribution::Kind::Uniform)
        return s.v_start - problem_.alpha * tau;
      const double A = el_asymptote(problem_);
      return A - (A - s.v_start) * std::exp(problem_.dist.lambda() * tau);
    }
  }
  return s.v_start;
}

double Trajectory::segment_position(const Segment& s, double t) const {
  const double tau = t - s.t_start;
  switch (s.kind) {
    case SegmentKind::Alpha:
      return s.v_start * tau + 0.5 * problem_.alpha * tau * tau;
    case SegmentKind::Beta:
      return s.v_start * tau - 0.5 * problem_.beta * tau * tau;
    case SegmentKind::VMaxHold:
    case SegmentKind::ZeroHold:
      return s.v_start * tau;
    case SegmentKind::EulerLagrange: {
      if (problem_.dist.kind() == GreenDistribution::Kind::Uniform)
        return s.v_start * tau - 0.5 * problem_.alpha * tau * tau;
      const double lam = problem_.dist.lambda();
      const double A = el_asymptote(problem_);
      return A * tau - (A - s.v_start) / lam * std::expm1(lam * tau);
    }
  }
  return 0.0;
}

const Segment& Trajectory::segment_at(double t) const {
  for (std::size_t i = segments_.size(); i-- > 1;) {
    if (t >= segments_[i].t_start) return segments_[i];
  }
  return segments_.front();
}

double Trajectory::velocity_at(double t) const {
  if (t <= 0.0) return segments_.front().v_start;
  if (t >= end_time_ && !segments_.back().infinite()) return end_velocity_;
  const Segment& s = segment_at(t);
  return segment_velocity(s, t);
}

double Trajectory::position_at(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= end_time_ && !segments_.back().infinite())
    return end_position_ + end_velocity_ * (t - end_time_);
  std::size_t idx = 0;
  for (std::size_t i = segments_.size(); i-- > 1;) {
    if (t >= segments_[i].t_start) {
      idx = i;
      break;
    }
  }
  return x_start_[idx] + segment_position(segments_[idx], t);
}

double Trajectory::stop_time() const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].kind == SegmentKind::ZeroHold)
      return segments_[i].t_start;
  }
  return end_time_;
}

PhasePattern Trajectory::pattern() const {
  PhasePattern pat;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const bool is_last = (i + 1 == segments_.size());
    switch (segments_[i].kind) {
      case SegmentKind::Alpha: pat.sequence.push_back(Phase::Alpha); break;
      case SegmentKind::Beta: pat.sequence.push_back(Phase::Beta); break;
      case SegmentKind::VMaxHold: pat.sequence.push_back(Phase::VMax); break;
      case SegmentKind::EulerLagrange: pat.sequence.push_back(Phase::EL); break;
      case SegmentKind::ZeroHold:
        if (is_last)
          pat.trailing_zero = true;
        else
          pat.sequence.push_back(Phase::Zero);
        break;
    }
  }
  return pat;
}

ValidationResult validate_problem(const ProblemSpec& p) {
  ValidationResult r;
  auto bad = [&](const std::string& why) { r.reasons.push_back(why); };

  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) bad("alpha-not-positive");
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) bad("beta-not-positive");
  if (!(p.v_max > 0.0) || !std::isfinite(p.v_max)) bad("v_max-not-positive");
  if (!(p.v0 >= 0.0) || p.v0 > p.v_max || !std::isfinite(p.v0))
    bad("v0-outside-[0,v_max]");
  if (!(p.d > 0.0) || !std::isfinite(p.d)) bad("d-not-positive");
  if (!std::isfinite(p.L) || p.L < p.v_max * p.v_max / (2.0 * p.alpha))
    bad("L-below-vmax^2/(2 alpha)");
  if (p.L < p.d) bad("L-below-d");
  if (!r.reasons.empty()) {
    r.feasible = false;
    return r;
  }

  const double q = p.dist.q_support();

  // Stopping feasibility: hardest braking must keep x(t) <= d on [0, q).
  const double t_stop = p.v0 / p.beta;
  const double need = (q >= t_stop) ? p.v0 * p.v0 / (2.0 * p.beta)
                                    : q * (p.v0 - q * p.beta / 2.0);
  if (p.d < need * (1.0 - 1e-15)) {
    r.feasible = false;
    bad("stopping-infeasible");
  }

  // Non-triviality for finite q: the light must be reachable before time q
  // even at full throttle; otherwise the red light never binds.
  if (!p.dist.unbounded()) {
    const double t_vm = (p.v_max - p.v0) / p.alpha;
    const double reach =
        (q <= t_vm) ? q * (p.v0 + q * p.alpha / 2.0)
                    : (p.v_max - p.v0) * (p.v_max + p.v0) / (2.0 * p.alpha) +
                          p.v_max * (q - t_vm);
    if (p.d >= reach) {
      r.trivial = true;
      bad("light-unreachable-before-q");
    }
  }

  // Uniform EL curves decelerate at alpha; braking must be at least as strong.
  if (p.dist.kind() == GreenDistribution::Kind::Uniform && p.beta < p.alpha) {
    r.feasible = false;
    bad("uniform-beta-below-alpha");
  }

  return r;
}

double check_lipschitz(const Trajectory& traj, int samples) {
  if (samples < 2)
    throw std::invalid_argument("check_lipschitz: samples must be >= 2");
  const ProblemSpec& p = traj.problem();
  double hi = traj.end_time();
  if (traj.segments().back().infinite())
    hi = traj.segments().back().t_start;
  if (hi <= 0.0) return 0.0;
  double worst = 0.0;
  double prev_t = 0.0;
  double prev_v = traj.velocity_at(0.0);
  for (int i = 1; i < samples; ++i) {
    const double t = hi * static_cast<double>(i) / (samples - 1);
    const double v = traj.velocity_at(t);
    const double slope = (v - prev_v) / (t - prev_t);
    worst = std::max(worst, slope - p.alpha);
    worst = std::max(worst, -p.beta - slope);
    prev_t = t;
    prev_v = v;
  }
  return std::max(worst, 0.0);
}

bool TrajectoryCheck::ok(const ProblemSpec& p) const {
  return max_continuity_gap <= 1e-9 && lipschitz_violation <= 1e-9 &&
         max_bound_violation <= 1e-9 && distance_residual <= 1e-6 * p.d;
}

TrajectoryCheck validate_trajectory(const Trajectory& traj) {
  const ProblemSpec& p = traj.problem();
  TrajectoryCheck c;

  const auto& segs = traj.segments();
  c.max_continuity_gap = std::abs(segs.front().v_start - p.v0);
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    const double v_end = segment_end_velocity(segs[i], p);
    c.max_continuity_gap =
        std::max(c.max_continuity_gap, std::abs(v_end - segs[i + 1].v_start));
  }

  for (const auto& s : segs) {
    const double v_end = segment_end_velocity(s, p);
    // Every segment kind is monotone in t, so endpoint checks suffice.
    const double lo = std::min(s.v_start, v_end);
    const double hi = std::max(s.v_start, v_end);
    c.max_bound_violation = std::max(c.max_bound_violation, -lo);
    c.max_bound_violation = std::max(c.max_bound_violation, hi - p.v_max);

    if (s.kind == SegmentKind::EulerLagrange &&
        p.dist.kind() == GreenDistribution::Kind::Exponential) {
      // Slope is -lambda (A - v): steepest at the segment end.
      const double A = p.v_max + p.alpha / p.dist.lambda();
      const double steepest = p.dist.lambda() * (A - v_end);
      c.lipschitz_violation =
          std::max(c.lipschitz_violation, steepest - p.beta);
    }
    if (s.kind == SegmentKind::EulerLagrange &&
        p.dist.kind() == GreenDistribution::Kind::Uniform) {
      c.lipschitz_violation =
          std::max(c.lipschitz_violation, p.alpha - p.beta);
    }
  }
  c.lipschitz_violation = std::max(c.lipschitz_violation, 0.0);
  c.max_bound_violation = std::max(c.max_bound_violation, 0.0);

  const double t_ref =
      p.dist.unbounded() ? traj.stop_time() : p.dist.q_support();
  c.distance_residual = std::abs(traj.position_at(t_ref) - p.d);
  return c;
}

}  // namespace redlight
