#pragma once

#include <limits>
#include <string>
#include <vector>

namespace redlight {

// Law of the remaining red time T. The density is bounded and non-increasing
// on [0, q_support), which is exactly what the excess-time construction of a
// stationary renewal process produces.
class GreenDistribution {
 public:
  enum class Kind { Uniform, Exponential, Excess };

  static GreenDistribution uniform(double q);
  static GreenDistribution exponential(double lambda);

  // Builds the stationary-renewal excess law from a tabulated interarrival
  // CDF. Knots are (x, Theta(x)) pairs, non-decreasing in both coordinates;
  // repeated x values encode jumps. The density is
  //   f(x) = (1/mean) * (1 - Theta(x)),
  // renormalised so the CDF reaches 1 at the support end.
  static GreenDistribution excess_of_renewal(
      const std::vector<std::pair<double, double>>& interarrival_cdf,
      double mean);

  // Raw tabulated density (linear interpolation between knots). No shape
  // checks are applied; run validate_density on the result. Intended for
  // diagnostics and for exercising the validator.
  static GreenDistribution from_density_table(const std::vector<double>& xs,
                                              const std::vector<double>& fs);

  Kind kind() const { return kind_; }

  // Support endpoint q; +infinity for Exponential.
  double q_support() const { return q_; }
  bool unbounded() const { return q_ == std::numeric_limits<double>::infinity(); }

  double lambda() const { return lambda_; }

  // Density bound K = f(0).
  double density_bound() const;

  double pdf(double t) const;
  double cdf(double t) const;

  // Quadrature horizon: q when finite, otherwise the time t_H with
  // 1 - F(t_H) < 1e-12 (Exponential: 28/lambda).
  double horizon() const;

  // Inverse CDF for u in [0,1); exact for Uniform/Exponential, solved on the
  // table for Excess.
  double inverse_cdf(double u) const;

 private:
  GreenDistribution() = default;

  Kind kind_ = Kind::Uniform;
  double q_ = 0.0;
  double lambda_ = 0.0;
  double mean_ = 0.0;

  // Excess tabulation: density and CDF values at knots_x_ (after scaling).
  std::vector<double> knots_x_;
  std::vector<double> f_vals_;
  std::vector<double> F_vals_;
};

struct DensityViolation {
  std::size_t grid_index;
  double t;
  double value;
  std::string what;  // "not-positive" or "increasing"
};

struct DensityReport {
  std::vector<DensityViolation> violations;
  double max_violation = 0.0;
  bool ok() const { return violations.empty(); }
};

// Checks positivity and monotone non-increase of the density on a grid over
// [0, min(q_support, horizon)). Reports violations, never throws.
DensityReport validate_density(const GreenDistribution& dist, int grid_points);

}  // namespace redlight
