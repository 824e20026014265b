#include "redlight/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "redlight/cost.hpp"
#include "redlight/euler_lagrange.hpp"
#include "redlight/quadrature.hpp"
#include "redlight/root_find.hpp"

namespace redlight {

namespace {

constexpr double kBig = 1e30;
constexpr double kInf = std::numeric_limits<double>::infinity();

class UnitRng {
 public:
  explicit UnitRng(std::uint64_t seed)
      : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {
    next_u64();
  }
  double next() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

double auto_horizon(const ProblemSpec& p) {
  if (!p.dist.unbounded()) return p.dist.q_support();
  // 1 - F < 1e-9 point, plus the time to come to a stop.
  const double t9 = -std::log(1e-9) / p.dist.lambda();
  return t9 + p.v_max / p.beta;
}

}  // namespace

namespace {

// One discrete step: exact landing velocity and displacement, honouring the
// clamps at 0 and v_max within the step.
struct Step {
  double v2;
  double dx;
};

Step advance(double v, double a, double dt, double v_max) {
  const double raw = v + a * dt;
  if (raw < 0.0) {
    // stops inside the step, stands for the rest
    return {0.0, v * v / (2.0 * -a)};
  }
  if (raw > v_max) {
    const double t_hit = (v_max - v) / a;
    return {v_max, (v_max * v_max - v * v) / (2.0 * a) + v_max * (dt - t_hit)};
  }
  return {raw, 0.5 * (v + raw) * dt};
}

}  // namespace

DPResult dp_min_cost(const ProblemSpec& p, const DPGrid& grid) {
  if (!(grid.dt > 0.0) || !(grid.dv > 0.0))
    throw std::invalid_argument("dp_min_cost: dt and dv must be positive");
  const ValidationResult vr = validate_problem(p);
  if (!vr.ok()) throw std::invalid_argument("dp_min_cost: invalid instance");

  const double horizon = grid.horizon > 0.0 ? grid.horizon : auto_horizon(p);
  const int n_t = std::max(1, static_cast<int>(std::lround(horizon / grid.dt)));
  const double dt = horizon / n_t;
  const int n_v = static_cast<int>(std::floor(p.v_max / grid.dv + 0.5)) + 1;
  const double dv = p.v_max / (n_v - 1);
  const int n_s = std::max(2, grid.position_buckets);
  // The position axis holds the stopping position s = x + v^2/(2 beta):
  // full braking keeps s constant, so the hard wall "must be able to stop
  // by d" is exactly the grid edge s = d and never interpolates into
  // forbidden cells.
  const double w = p.d / (n_s - 1);

  const std::size_t cells = static_cast<std::size_t>(n_v) * n_s;
  const std::uint64_t value_bytes = 2ull * cells * sizeof(double);
  if (value_bytes > grid.memory_budget_bytes)
    throw std::invalid_argument("dp_min_cost: grid exceeds the memory budget");
  const std::uint64_t action_bytes = static_cast<std::uint64_t>(n_t) * cells;
  const bool want_trace =
      value_bytes + action_bytes <= grid.memory_budget_bytes;

  std::vector<double> accels = grid.accel_choices;
  for (double a : {-p.beta, 0.0, p.alpha})
    if (std::find(accels.begin(), accels.end(), a) == accels.end())
      accels.push_back(a);
  std::sort(accels.begin(), accels.end());
  if (accels.size() > 250)
    throw std::invalid_argument("dp_min_cost: too many acceleration choices");
  const int n_a = static_cast<int>(accels.size());

  // Time-independent transition tables in (velocity, stopping-position).
  std::vector<int> iv_lo(n_v * n_a);
  std::vector<double> theta_v(n_v * n_a);
  std::vector<int> is_shift(n_v * n_a);
  std::vector<double> theta_s(n_v * n_a);
  std::vector<double> v_mid(n_v * n_a);
  for (int iv = 0; iv < n_v; ++iv) {
    const double v = iv * dv;
    for (int ia = 0; ia < n_a; ++ia) {
      const Step st = advance(v, accels[ia], dt, p.v_max);
      double ds = st.dx + (st.v2 * st.v2 - v * v) / (2.0 * p.beta);
      if (accels[ia] == -p.beta) ds = 0.0;  // exact by construction
      ds = std::max(ds, 0.0);
      const int k = iv * n_a + ia;
      int ivl = std::min(n_v - 2, static_cast<int>(std::floor(st.v2 / dv)));
      iv_lo[k] = ivl;
      theta_v[k] = std::clamp(st.v2 / dv - ivl, 0.0, 1.0);
      is_shift[k] = static_cast<int>(std::floor(ds / w));
      theta_s[k] = ds / w - is_shift[k];
      v_mid[k] = 0.5 * (v + st.v2);
    }
  }

  auto k_fun = [&](double x, double v) {
    const double dvv = p.v_max - v;
    return dvv * dvv / (2.0 * p.alpha * p.v_max) +
           (p.L - std::min(x, p.d)) / p.v_max;
  };

  std::vector<double> next(cells);
  std::vector<double> cur(cells);
  std::vector<std::uint8_t> actions;
  if (want_trace) actions.assign(static_cast<std::size_t>(n_t) * cells, 0);

  const double t_end = n_t * dt;
  const double tail_mass = 1.0 - p.dist.cdf(t_end);
  for (int iv = 0; iv < n_v; ++iv) {
    const double v = iv * dv;
    const double x_off = v * v / (2.0 * p.beta);
    for (int is = 0; is < n_s; ++is)
      next[static_cast<std::size_t>(iv) * n_s + is] =
          tail_mass * (t_end + k_fun(is * w - x_off, v));
  }

  std::vector<double> stage(n_v * n_a);
  for (int k = n_t - 1; k >= 0; --k) {
    const double t_mid = (k + 0.5) * dt;
    const double weight = p.dist.pdf(t_mid) * dt;
    // Accrue weight * (t_mid + k(x, v_mid)) with x at the step start; the
    // s-linear part of k is action-independent and added after the min.
    const double ramp = -weight * w / p.v_max;
    for (int iv = 0; iv < n_v; ++iv) {
      const double v = iv * dv;
      const double x_off = v * v / (2.0 * p.beta);
      for (int ia = 0; ia < n_a; ++ia) {
        const int idx = iv * n_a + ia;
        stage[idx] = weight * (t_mid + k_fun(-x_off, v_mid[idx]));
      }
    }
    std::uint8_t* act_layer =
        want_trace ? actions.data() + static_cast<std::size_t>(k) * cells
                   : nullptr;
    for (int iv = 0; iv < n_v; ++iv) {
      double* out = cur.data() + static_cast<std::size_t>(iv) * n_s;
      std::fill(out, out + n_s, kBig);
      std::uint8_t* act_row =
          act_layer ? act_layer + static_cast<std::size_t>(iv) * n_s : nullptr;
      for (int ia = 0; ia < n_a; ++ia) {
        const int idx = iv * n_a + ia;
        const double* row_lo =
            next.data() + static_cast<std::size_t>(iv_lo[idx]) * n_s;
        const double* row_hi = row_lo + n_s;
        const double tv = theta_v[idx];
        const int shift = is_shift[idx];
        const double ts = theta_s[idx];
        const double sc = stage[idx];
        const bool exact_s = ts < 1e-12;
        const int hi = n_s - 1 - shift - (exact_s ? 0 : 1);
        if (tv < 1e-12) {
          for (int is = 0; is <= hi; ++is) {
            const double* c = row_lo + is + shift;
            const double j = sc + (exact_s ? c[0] : (1.0 - ts) * c[0] + ts * c[1]);
            if (j < out[is]) {
              out[is] = j;
              if (act_row) act_row[is] = static_cast<std::uint8_t>(ia);
            }
          }
        } else {
          for (int is = 0; is <= hi; ++is) {
            const double* clo = row_lo + is + shift;
            const double* chi = row_hi + is + shift;
            const double jlo = exact_s ? clo[0] : (1.0 - ts) * clo[0] + ts * clo[1];
            const double jhi = exact_s ? chi[0] : (1.0 - ts) * chi[0] + ts * chi[1];
            const double j = sc + (1.0 - tv) * jlo + tv * jhi;
            if (j < out[is]) {
              out[is] = j;
              if (act_row) act_row[is] = static_cast<std::uint8_t>(ia);
            }
          }
        }
      }
      for (int is = 0; is < n_s; ++is)
        if (out[is] < kBig) out[is] += ramp * is;
    }
    std::swap(cur, next);
  }

  const int iv0 =
      std::clamp(static_cast<int>(std::lround(p.v0 / dv)), 0, n_v - 1);
  const double s0 = p.v0 * p.v0 / (2.0 * p.beta);
  const int is0 = std::min(n_s - 2, static_cast<int>(std::floor(s0 / w)));
  const double ts0 = std::clamp(s0 / w - is0, 0.0, 1.0);
  DPResult result;
  const double* row0 = next.data() + static_cast<std::size_t>(iv0) * n_s;
  result.cost = (1.0 - ts0) * row0[is0] + ts0 * row0[is0 + 1];

  if (want_trace && result.cost < kBig) {
    double v = iv0 * dv;
    double s = s0;
    for (int k = 0; k < n_t; ++k) {
      const int iv =
          std::clamp(static_cast<int>(std::lround(v / dv)), 0, n_v - 1);
      const int is =
          std::clamp(static_cast<int>(std::lround(s / w)), 0, n_s - 1);
      const int ia =
          actions[static_cast<std::size_t>(k) * cells + static_cast<std::size_t>(iv) * n_s + is];
      result.trace.push_back(
          {k * dt, v, s - v * v / (2.0 * p.beta), accels[ia]});
      const Step st = advance(v, accels[ia], dt, p.v_max);
      double ds = st.dx + (st.v2 * st.v2 - v * v) / (2.0 * p.beta);
      if (accels[ia] == -p.beta) ds = 0.0;
      s = std::min(s + std::max(ds, 0.0), p.d);
      v = st.v2;
    }
    result.trace.push_back({n_t * dt, v, s - v * v / (2.0 * p.beta), 0.0});
  }
  return result;
}

std::optional<Trajectory> assemble_switch_trajectory(const ProblemSpec& p,
                                                     double v_c) {
  if (p.dist.kind() != GreenDistribution::Kind::Exponential) return std::nullopt;
  const double lam = p.dist.lambda();
  const double A = p.v_max + p.alpha / lam;
  if (!(v_c >= 0.0) || v_c > p.v_max) return std::nullopt;

  auto el_dur = [&](double v_hi, double v_lo) {
    return std::log((A - v_lo) / (A - v_hi)) / lam;
  };
  const double tail = v_c * v_c / (2.0 * p.beta);
  std::vector<Segment> segs;

  if (p.v0 >= v_c) {
    const double d_el0 = el_distance(p.v0, v_c, lam, A) + tail;
    if (p.d < d_el0) {
      // Brake onto the EL curve that still meets the distance constraint.
      const double v_b = solve_monotone(
          [&](double v) {
            return (p.v0 * p.v0 - v * v) / (2.0 * p.beta) +
                   el_distance(v, v_c, lam, A) + tail;
          },
          v_c, p.v0, p.d);
      segs.push_back({SegmentKind::Beta, 0.0, (p.v0 - v_b) / p.beta, p.v0});
      segs.push_back({SegmentKind::EulerLagrange, 0.0, el_dur(v_b, v_c), v_b});
    } else {
      const double d_vmax = (p.v_max * p.v_max - p.v0 * p.v0) / (2.0 * p.alpha) +
                            el_distance(p.v_max, v_c, lam, A) + tail;
      if (p.d <= d_vmax) {
        const double v_a = solve_monotone(
            [&](double v) {
              return (v * v - p.v0 * p.v0) / (2.0 * p.alpha) +
                     el_distance(v, v_c, lam, A) + tail;
            },
            p.v0, p.v_max, p.d);
        segs.push_back({SegmentKind::Alpha, 0.0, (v_a - p.v0) / p.alpha, p.v0});
        segs.push_back({SegmentKind::EulerLagrange, 0.0, el_dur(v_a, v_c), v_a});
      } else {
        const double hold = (p.d - d_vmax) / p.v_max;
        segs.push_back(
            {SegmentKind::Alpha, 0.0, (p.v_max - p.v0) / p.alpha, p.v0});
        segs.push_back({SegmentKind::VMaxHold, 0.0, hold, p.v_max});
        segs.push_back(
            {SegmentKind::EulerLagrange, 0.0, el_dur(p.v_max, v_c), p.v_max});
      }
    }
  } else {
    const double d_min_family =
        (v_c * v_c - p.v0 * p.v0) / (2.0 * p.alpha) + tail;
    if (p.d < d_min_family) return std::nullopt;
    const double d_vmax = (p.v_max * p.v_max - p.v0 * p.v0) / (2.0 * p.alpha) +
                          el_distance(p.v_max, v_c, lam, A) + tail;
    if (p.d <= d_vmax) {
      const double v_a = solve_monotone(
          [&](double v) {
            return (v * v - p.v0 * p.v0) / (2.0 * p.alpha) +
                   el_distance(v, v_c, lam, A) + tail;
          },
          v_c, p.v_max, p.d);
      segs.push_back({SegmentKind::Alpha, 0.0, (v_a - p.v0) / p.alpha, p.v0});
      segs.push_back({SegmentKind::EulerLagrange, 0.0, el_dur(v_a, v_c), v_a});
    } else {
      const double hold = (p.d - d_vmax) / p.v_max;
      segs.push_back(
          {SegmentKind::Alpha, 0.0, (p.v_max - p.v0) / p.alpha, p.v0});
      segs.push_back({SegmentKind::VMaxHold, 0.0, hold, p.v_max});
      segs.push_back(
          {SegmentKind::EulerLagrange, 0.0, el_dur(p.v_max, v_c), p.v_max});
    }
  }
  segs.push_back({SegmentKind::Beta, 0.0, v_c / p.beta, v_c});
  segs.push_back({SegmentKind::ZeroHold, 0.0, kInf, 0.0});
  return Trajectory(normalize_segments(std::move(segs), p), p);
}

SweepResult sweep_switch_velocity(const ProblemSpec& p,
                                  const PhasePattern& family,
                                  int grid_points) {
  if (p.dist.kind() != GreenDistribution::Kind::Exponential)
    throw std::invalid_argument("sweep_switch_velocity: Exponential only");
  bool has_switch = false;
  for (std::size_t i = 0; i + 1 < family.sequence.size(); ++i)
    if (family.sequence[i] == Phase::EL &&
        family.sequence[i + 1] == Phase::Beta)
      has_switch = true;
  if (!has_switch)
    throw std::invalid_argument(
        "sweep_switch_velocity: family has no EL->beta switch");
  if (grid_points < 2)
    throw std::invalid_argument("sweep_switch_velocity: need >= 2 grid points");

  const double vb = std::max(0.0, v_beta(p));
  SweepResult result;
  result.points.reserve(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double v_c =
        vb + (p.v_max - vb) * static_cast<double>(i) / (grid_points - 1);
    SweepPoint pt{v_c, std::nullopt};
    if (auto traj = assemble_switch_trajectory(p, v_c)) {
      const TrajectoryCheck check = validate_trajectory(*traj);
      if (check.ok(p)) pt.cost = expected_arrival(*traj, p);
    }
    if (pt.cost && (!result.argmin_vc || *pt.cost < result.argmin_cost)) {
      result.argmin_vc = v_c;
      result.argmin_cost = *pt.cost;
    }
    result.points.push_back(pt);
  }
  return result;
}

double Bump::value(double t) const {
  const double u = (t - t0) / width;
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double m = u < 0.5 ? u : 1.0 - u;
  // C1 pair of quadratics per side; unit height at the centre.
  const double s = m < 0.25 ? 8.0 * m * m : 1.0 - 8.0 * (0.5 - m) * (0.5 - m);
  return height * s;
}

double Bump::slope(double t) const {
  const double u = (t - t0) / width;
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double m = u < 0.5 ? u : 1.0 - u;
  const double ds = m < 0.25 ? 16.0 * m : 16.0 * (0.5 - m);
  return (u < 0.5 ? 1.0 : -1.0) * height * ds / width;
}

double Bump::integral(double t) const {
  // Antiderivative of the normalised shape on [0, 1]; total mass 1/2.
  auto prim = [](double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 0.5;
    auto half = [](double m) {
      // int_0^m of the rising half shape, m in [0, 1/2]
      if (m <= 0.25) return 8.0 * m * m * m / 3.0;
      const double r = 0.5 - m;
      return 1.0 / 24.0 + (0.25 - r) - 8.0 / 3.0 * (0.015625 - r * r * r);
    };
    if (u <= 0.5) return half(u);
    return 0.5 - half(1.0 - u);
  };
  return height * width * prim((t - t0) / width);
}

double perturbed_cost(const Trajectory& traj, const ProblemSpec& p,
                      const Bump& add, const Bump& remove) {
  const auto v = [&](double t) {
    return traj.velocity_at(t) + add.value(t) - remove.value(t);
  };
  const auto x = [&](double t) {
    return traj.position_at(t) + add.integral(t) - remove.integral(t);
  };
  std::vector<double> pts;
  for (const auto& s : traj.segments()) pts.push_back(s.t_start);
  for (const Bump* b : {&add, &remove})
    for (int j = 0; j <= 4; ++j) pts.push_back(b->t0 + 0.25 * j * b->width);

  // The closed-form tail needs a standstill: extend the head integral past
  // any bump that straddles the base stop time.
  double t_end = p.dist.q_support();
  if (p.dist.unbounded()) {
    t_end = traj.stop_time();
    for (const Bump* b : {&add, &remove})
      if (b->height != 0.0) t_end = std::max(t_end, b->t0 + b->width);
  }
  return expectation_of_profile(p, v, x, t_end, std::move(pts));
}

double expectation_of_profile(const ProblemSpec& p,
                              const std::function<double(double)>& v,
                              const std::function<double(double)>& x,
                              double t_end,
                              std::vector<double> breakpoints) {
  const auto integrand = [&](double t) {
    const double vv = std::clamp(v(t), 0.0, p.v_max);
    const double xx = std::clamp(x(t), 0.0, p.d);
    return (t + k_remainder(xx, vv, p)) * p.dist.pdf(t);
  };
  if (!p.dist.unbounded())
    return integrate_split(integrand, 0.0, p.dist.q_support(), breakpoints,
                           1e-11);
  const double lam = p.dist.lambda();
  const double head =
      integrate_split(integrand, 0.0, t_end, breakpoints, 1e-11);
  const double x_end = std::clamp(x(t_end), 0.0, p.d);
  const double v_end = std::clamp(v(t_end), 0.0, p.v_max);
  const double tail = std::exp(-lam * t_end) *
                      (t_end + 1.0 / lam + k_remainder(x_end, v_end, p));
  return head + tail;
}

namespace {

struct SlopeRange {
  double lo, hi;
};

// Conservative slope range of a segment restricted to [a, b].
SlopeRange segment_slope_range(const Segment& s, const ProblemSpec& p,
                               double a, double b) {
  switch (s.kind) {
    case SegmentKind::Alpha:
      return {p.alpha, p.alpha};
    case SegmentKind::Beta:
      return {-p.beta, -p.beta};
    case SegmentKind::VMaxHold:
    case SegmentKind::ZeroHold:
      return {0.0, 0.0};
    case SegmentKind::EulerLagrange: {
      if (p.dist.kind() == GreenDistribution::Kind::Uniform)
        return {-p.alpha, -p.alpha};
      const double lam = p.dist.lambda();
      const double A = p.v_max + p.alpha / lam;
      const double b_coef = (A - s.v_start) * std::exp(-lam * s.t_start);
      const double s_a = -lam * b_coef * std::exp(lam * a);
      const double s_b = -lam * b_coef * std::exp(lam * b);
      return {std::min(s_a, s_b), std::max(s_a, s_b)};
    }
  }
  return {0.0, 0.0};
}

}  // namespace

PerturbationResult perturbation_test(const Trajectory& traj,
                                     const ProblemSpec& p, int n,
                                     std::uint64_t seed) {
  PerturbationResult result;
  result.base_cost =
      perturbed_cost(traj, p, Bump{0, 1, 0}, Bump{0, 1, 0});
  result.min_delta = 0.0;

  const bool unbounded = p.dist.unbounded();
  const double t_hi = unbounded ? traj.stop_time() : p.dist.q_support();
  if (t_hi <= 0.0) return result;

  // Time cuts where either the base profile or a bump changes its formula.
  std::vector<double> base_cuts;
  for (const auto& s : traj.segments()) base_cuts.push_back(s.t_start);
  base_cuts.push_back(t_hi);

  auto feasible = [&](const Bump& add, const Bump& remove) {
    std::vector<double> cuts = base_cuts;
    double window_end = t_hi;
    for (const Bump* b : {&add, &remove}) {
      for (int j = 0; j <= 4; ++j) cuts.push_back(b->t0 + 0.25 * j * b->width);
      window_end = std::max(window_end, b->t0 + b->width);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const auto& segs = traj.segments();
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = std::max(0.0, cuts[i]);
      const double b = std::min(window_end, cuts[i + 1]);
      if (b <= a) continue;
      std::size_t si = 0;
      for (std::size_t s = segs.size(); s-- > 0;) {
        if (a >= segs[s].t_start - 1e-15) {
          si = s;
          break;
        }
      }
      const SlopeRange base = segment_slope_range(segs[si], p, a, b);
      // Bump slopes are linear on each quarter: endpoint evaluation is exact.
      double add_lo = std::min(add.slope(a), add.slope(b));
      double add_hi = std::max(add.slope(a), add.slope(b));
      double rem_lo = std::min(-remove.slope(a), -remove.slope(b));
      double rem_hi = std::max(-remove.slope(a), -remove.slope(b));
      if (base.hi + add_hi + rem_hi > p.alpha + 1e-12) return false;
      if (base.lo + add_lo + rem_lo < -p.beta - 1e-12) return false;
      // Velocity bounds, conservatively per piece.
      const double v_a = traj.velocity_at(a);
      const double v_b = traj.velocity_at(b);
      const double v_lo = std::min(v_a, v_b);
      const double v_hi = std::max(v_a, v_b);
      const double bump_max =
          std::max({add.value(a), add.value(b),
                    add.t0 + 0.5 * add.width > a && add.t0 + 0.5 * add.width < b
                        ? add.height
                        : 0.0});
      const double dip_max = std::max(
          {remove.value(a), remove.value(b),
           remove.t0 + 0.5 * remove.width > a &&
                   remove.t0 + 0.5 * remove.width < b
               ? remove.height
               : 0.0});
      if (v_hi + bump_max > p.v_max + 1e-12) return false;
      if (v_lo - dip_max < -1e-12) return false;
    }
    return true;
  };

  UnitRng rng(seed);
  int accepted = 0;
  int guard = 0;
  const int max_attempts = 400 * n;
  while (accepted < n && guard < max_attempts) {
    ++guard;
    const double w1 = t_hi * (0.02 + 0.43 * rng.next());
    const double w2 = t_hi * (0.02 + 0.43 * rng.next());
    // The addition may straddle the stop time (its falling half lands on the
    // terminal standstill); the removal needs positive velocity throughout.
    const double a1_hi = unbounded ? t_hi - 0.05 * w1 : t_hi - w1;
    if (a1_hi <= 0.0 || t_hi - w2 <= 0.0) continue;
    const double a1 = rng.next() * a1_hi;
    const double a2 = rng.next() * (t_hi - w2);
    // Disjoint supports keep the mass bookkeeping simple.
    if (a1 < a2 + w2 && a2 < a1 + w1) continue;
    const double u = rng.next();
    const double h = p.v_max * (1e-5 + 0.12 * u * u * u);
    Bump add{a1, w1, h};
    Bump remove{a2, w2, h * w1 / w2};  // equal mass: h w / 2 each side
    if (!feasible(add, remove)) continue;
    ++accepted;
    const double cost = perturbed_cost(traj, p, add, remove);
    const double delta = cost - result.base_cost;
    if (delta < result.min_delta) {
      result.min_delta = delta;
      result.worst_add = add;
      result.worst_remove = remove;
    }
  }
  result.trials = accepted;

  // Smooth bumps cannot ride the saturated walls, so they miss wall
  // translations (the move-towards-EL direction with a different switch
  // point). Cover those with blends towards EL-family members: convex
  // combinations of feasible profiles are feasible and integral-preserving.
  if (p.dist.kind() == GreenDistribution::Kind::Exponential) {
    const double vb = std::max(0.0, v_beta(p));
    for (int i = 0; i <= 24; ++i) {
      const double v_c = vb + (p.v_max - vb) * i / 24.0;
      const auto member = assemble_switch_trajectory(p, v_c);
      if (!member || !validate_trajectory(*member).ok(p)) continue;
      std::vector<double> cuts;
      for (const auto& s : traj.segments()) cuts.push_back(s.t_start);
      for (const auto& s : member->segments()) cuts.push_back(s.t_start);
      const double t_end = std::max(traj.stop_time(), member->stop_time());
      for (double gamma : {0.35, 1.0}) {
        const double cost = expectation_of_profile(
            p,
            [&](double t) {
              return (1.0 - gamma) * traj.velocity_at(t) +
                     gamma * member->velocity_at(t);
            },
            [&](double t) {
              return (1.0 - gamma) * traj.position_at(t) +
                     gamma * member->position_at(t);
            },
            t_end, cuts);
        const double delta = cost - result.base_cost;
        if (delta < result.min_delta) result.min_delta = delta;
      }
    }
  }
  return result;
}

}  // namespace redlight
