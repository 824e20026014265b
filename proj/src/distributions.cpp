#include "redlight/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace redlight {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

GreenDistribution GreenDistribution::uniform(double q) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw std::invalid_argument("uniform: q must be finite and positive");
  GreenDistribution d;
  d.kind_ = Kind::Uniform;
  d.q_ = q;
  return d;
}

GreenDistribution GreenDistribution::exponential(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("exponential: lambda must be finite and positive");
  GreenDistribution d;
  d.kind_ = Kind::Exponential;
  d.q_ = kInf;
  d.lambda_ = lambda;
  return d;
}

GreenDistribution GreenDistribution::excess_of_renewal(
    const std::vector<std::pair<double, double>>& interarrival_cdf,
    double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("excess_of_renewal: mean must be positive");
  if (interarrival_cdf.size() < 2)
    throw std::invalid_argument("excess_of_renewal: need at least two knots");

  const auto& knots = interarrival_cdf;
  if (knots.front().first != 0.0 || knots.front().second != 0.0)
    throw std::invalid_argument("excess_of_renewal: first knot must be (0, 0)");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i].first < knots[i - 1].first ||
        knots[i].second < knots[i - 1].second)
      throw std::invalid_argument("excess_of_renewal: knots must be non-decreasing");
  }
  if (std::abs(knots.back().second - 1.0) > 1e-9)
    throw std::invalid_argument("excess_of_renewal: table must reach Theta = 1");

  GreenDistribution d;
  d.kind_ = Kind::Excess;
  d.mean_ = mean;

  // Support ends where Theta first reaches 1.
  std::size_t last = knots.size() - 1;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i].second >= 1.0 - 1e-15) {
      last = i;
      break;
    }
  }
  d.q_ = knots[last].first;
  if (!(d.q_ > 0.0))
    throw std::invalid_argument("excess_of_renewal: support endpoint must be positive");

  d.knots_x_.reserve(last + 1);
  d.f_vals_.reserve(last + 1);
  for (std::size_t i = 0; i <= last; ++i) {
    d.knots_x_.push_back(knots[i].first);
    d.f_vals_.push_back((1.0 - knots[i].second) / mean);
  }

  // f is piecewise linear between knots, so trapezoids integrate it exactly.
  d.F_vals_.assign(d.knots_x_.size(), 0.0);
  for (std::size_t i = 1; i < d.knots_x_.size(); ++i) {
    const double w = d.knots_x_[i] - d.knots_x_[i - 1];
    d.F_vals_[i] = d.F_vals_[i - 1] + 0.5 * w * (d.f_vals_[i] + d.f_vals_[i - 1]);
  }
  const double total = d.F_vals_.back();
  if (!(total > 0.0))
    throw std::invalid_argument("excess_of_renewal: density integrates to zero");
  const double scale = 1.0 / total;
  for (auto& v : d.f_vals_) v *= scale;
  for (auto& v : d.F_vals_) v *= scale;
  return d;
}

GreenDistribution GreenDistribution::from_density_table(
    const std::vector<double>& xs, const std::vector<double>& fs) {
  if (xs.size() != fs.size() || xs.size() < 2)
    throw std::invalid_argument("from_density_table: need matching tables, >= 2 knots");
  GreenDistribution d;
  d.kind_ = Kind::Excess;
  d.q_ = xs.back();
  d.knots_x_ = xs;
  d.f_vals_ = fs;
  d.F_vals_.assign(xs.size(), 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double w = xs[i] - xs[i - 1];
    d.F_vals_[i] = d.F_vals_[i - 1] + 0.5 * w * (fs[i] + fs[i - 1]);
  }
  const double total = d.F_vals_.back();
  if (total > 0.0) {
    for (auto& v : d.f_vals_) v /= total;
    for (auto& v : d.F_vals_) v /= total;
  }
  d.mean_ = 0.0;
  return d;
}

double GreenDistribution::density_bound() const {
  switch (kind_) {
    case Kind::Uniform:
      return 1.0 / q_;
    case Kind::Exponential:
      return lambda_;
    case Kind::Excess:
      return f_vals_.front();
  }
  return 0.0;
}

double GreenDistribution::pdf(double t) const {
  if (t < 0.0) return 0.0;
  switch (kind_) {
    case Kind::Uniform:
      return t < q_ ? 1.0 / q_ : 0.0;
    case Kind::Exponential:
      return lambda_ * std::exp(-lambda_ * t);
    case Kind::Excess: {
      if (t >= q_) return 0.0;
      auto it = std::upper_bound(knots_x_.begin(), knots_x_.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - knots_x_.begin());
      if (hi == 0) return f_vals_.front();
      const std::size_t lo = hi - 1;
      const double w = knots_x_[hi] - knots_x_[lo];
      if (w <= 0.0) return f_vals_[hi];  // jump knot: right-continuous
      const double u = (t - knots_x_[lo]) / w;
      return f_vals_[lo] + u * (f_vals_[hi] - f_vals_[lo]);
    }
  }
  return 0.0;
}

double GreenDistribution::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Uniform:
      return std::min(t / q_, 1.0);
    case Kind::Exponential:
      return -std::expm1(-lambda_ * t);
    case Kind::Excess: {
      if (t >= q_) return 1.0;
      auto it = std::upper_bound(knots_x_.begin(), knots_x_.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - knots_x_.begin());
      if (hi == 0) return 0.0;
      const std::size_t lo = hi - 1;
      // Exact integral of the linear density piece.
      return F_vals_[lo] + 0.5 * (t - knots_x_[lo]) * (f_vals_[lo] + pdf(t));
    }
  }
  return 0.0;
}

double GreenDistribution::horizon() const {
  if (!unbounded()) return q_;
  // 1 - F(28/lambda) = e^{-28} < 1e-12
  return 28.0 / lambda_;
}

double GreenDistribution::inverse_cdf(double u) const {
  u = std::clamp(u, 0.0, 1.0 - 1e-16);
  switch (kind_) {
    case Kind::Uniform:
      return u * q_;
    case Kind::Exponential:
      return -std::log1p(-u) / lambda_;
    case Kind::Excess: {
      auto it = std::upper_bound(F_vals_.begin(), F_vals_.end(), u);
      std::size_t hi = static_cast<std::size_t>(it - F_vals_.begin());
      if (hi == 0) return 0.0;
      if (hi >= F_vals_.size()) hi = F_vals_.size() - 1;
      double lo_x = knots_x_[hi - 1];
      double hi_x = knots_x_[hi];
      for (int i = 0; i < 64 && hi_x - lo_x > 0.0; ++i) {
        const double mid = 0.5 * (lo_x + hi_x);
        if (cdf(mid) < u)
          lo_x = mid;
        else
          hi_x = mid;
      }
      return 0.5 * (lo_x + hi_x);
    }
  }
  return 0.0;
}

DensityReport validate_density(const GreenDistribution& dist, int grid_points) {
  if (grid_points < 2)
    throw std::invalid_argument("validate_density: grid_points must be >= 2");
  DensityReport report;
  const double hi = std::min(dist.q_support(), dist.horizon());
  const int n = grid_points;
  double prev = -1.0;
  for (int i = 0; i < n; ++i) {
    // Sample strictly inside [0, hi).
    const double t = hi * (static_cast<double>(i) / n);
    const double f = dist.pdf(t);
    if (!(f > 0.0)) {
      report.violations.push_back({static_cast<std::size_t>(i), t, f, "not-positive"});
      report.max_violation = std::max(report.max_violation, -f);
    }
    if (i > 0 && f > prev + 1e-12 * std::max(1.0, prev)) {
      report.violations.push_back({static_cast<std::size_t>(i), t, f - prev, "increasing"});
      report.max_violation = std::max(report.max_violation, f - prev);
    }
    prev = f;
  }
  return report;
}

}  // namespace redlight
