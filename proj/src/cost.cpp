#include "redlight/cost.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "redlight/quadrature.hpp"

namespace redlight {

namespace {

// 64-bit splitmix-seeded xorshift generator mapped to [0,1) via the top 53
// bits. Hand-rolled so results are identical on every platform.
class UnitRng {
 public:
  explicit UnitRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {
    next_u64();
  }
  double next() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

std::vector<double> segment_breakpoints(const Trajectory& traj) {
  std::vector<double> pts;
  for (const auto& s : traj.segments()) pts.push_back(s.t_start);
  pts.push_back(traj.end_time());
  return pts;
}

void require_valid(const Trajectory& traj, const ProblemSpec& p) {
  const TrajectoryCheck c = validate_trajectory(traj);
  if (!c.ok(p))
    throw std::invalid_argument("expected_arrival: trajectory fails kinematics invariants");
}

}  // namespace

double k_remainder(double x, double v, const ProblemSpec& p) {
  if (v > p.v_max * (1.0 + 1e-12) || v < -1e-12)
    throw std::domain_error("k_remainder: v outside [0, v_max]");
  if (x > p.L * (1.0 + 1e-12) || x < -1e-12)
    throw std::domain_error("k_remainder: x outside [0, L]");
  const double dv = p.v_max - v;
  return dv * dv / (2.0 * p.alpha * p.v_max) + (p.L - x) / p.v_max;
}

double expected_arrival(const Trajectory& traj, const ProblemSpec& p) {
  require_valid(traj, p);

  const auto pts = segment_breakpoints(traj);
  const auto integrand = [&](double t) {
    return (t + k_remainder(traj.position_at(t), traj.velocity_at(t), p)) *
           p.dist.pdf(t);
  };

  if (!p.dist.unbounded()) {
    const double q = p.dist.q_support();
    return integrate_split(integrand, 0.0, q, pts, 1e-9);
  }

  // Unbounded support: the solver appends a terminal standstill, whose tail
  // contribution is closed form under the Exponential law.
  const auto& last = traj.segments().back();
  if (last.kind != SegmentKind::ZeroHold || !last.infinite())
    throw std::invalid_argument(
        "expected_arrival: unbounded support needs a terminal standstill");
  const double t_s = traj.stop_time();
  const double lam = p.dist.lambda();
  const double head = integrate_split(integrand, 0.0, t_s, pts, 1e-9);
  const double tail =
      std::exp(-lam * t_s) * (t_s + 1.0 / lam + k_remainder(p.d, 0.0, p));
  return head + tail;
}

McEstimate expected_arrival_mc(const Trajectory& traj, const ProblemSpec& p,
                               std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("expected_arrival_mc: n must be >= 1");
  UnitRng rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = p.dist.inverse_cdf(rng.next());
    const double x = std::min(traj.position_at(t), p.d);
    const double sample = t + k_remainder(x, traj.velocity_at(t), p);
    sum += sample;
    sum_sq += sample * sample;
  }
  const double mean = sum / static_cast<double>(n);
  double stderr_est = 0.0;
  if (n > 1) {
    const double var =
        std::max(0.0, (sum_sq - static_cast<double>(n) * mean * mean) /
                          static_cast<double>(n - 1));
    stderr_est = std::sqrt(var / static_cast<double>(n));
  }
  return {mean, stderr_est};
}

double PressureField::pressure(double t, double C) const {
  return -(v_max - C) * dist.pdf(t) + alpha * dist.cdf(t) + B;
}

double pressure_action(const Trajectory& traj, const PressureField& pf) {
  const auto pts = segment_breakpoints(traj);
  const double hi = pf.dist.unbounded()
                        ? std::min(traj.stop_time(), pf.dist.horizon())
                        : pf.dist.q_support();
  const auto inner = [&](double t) {
    const double v = traj.velocity_at(t);
    if (v <= 0.0) return 0.0;
    return integrate([&](double C) { return pf.pressure(t, C); }, 0.0, v,
                     1e-13, 8);
  };
  return integrate_split(inner, 0.0, hi, pts, 1e-9);
}

}  // namespace redlight
