#pragma once

#include <span>

#include "redlight/distributions.hpp"
#include "redlight/kinematics.hpp"

namespace redlight {

// One member of the Euler-Lagrange isobar family
//   v(t) = v_max - (B + alpha F(t)) / f(t).
// The Exponential family is kept in coefficient form v(t) = A - b e^{lambda t}
// (b stays well scaled as t grows); B = lambda b - alpha on the API surface.
// The Uniform family is the line v(t) = c - alpha t with intercept
// c = v_max - q B. General tabulated distributions evaluate the display above
// directly.
class ELCurve {
 public:
  enum class Family { Uniform, Exponential, General };

  static ELCurve uniform_from_offset(double B, double alpha, double v_max,
                                     double q);
  static ELCurve uniform_from_intercept(double c, double alpha, double v_max,
                                        double q);
  static ELCurve exponential_from_coeff(double b, double alpha, double v_max,
                                        double lambda);
  static ELCurve exponential_from_offset(double B, double alpha, double v_max,
                                         double lambda);
  // Exponential curve through the point (t, v).
  static ELCurve exponential_through(double t, double v, double alpha,
                                     double v_max, double lambda);
  static ELCurve general_from_offset(double B, double alpha, double v_max,
                                     GreenDistribution dist);

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  double v_max() const { return v_max_; }
  double lambda() const { return lambda_; }
  double q() const { return q_; }

  // Exponential asymptote A = v_max + alpha / lambda.
  double A() const { return v_max_ + alpha_ / lambda_; }
  double coeff_b() const { return b_; }
  double intercept_c() const { return c_; }
  double offset_B() const;

  double velocity(double t) const;
  double slope(double t) const;  // analytic dv/dt of the closed form

 private:
  Family family_;
  double alpha_ = 0.0;
  double v_max_ = 0.0;
  double lambda_ = 0.0;  // Exponential
  double q_ = 0.0;       // Uniform
  double b_ = 0.0;       // Exponential coefficient
  double c_ = 0.0;       // Uniform intercept
  double B_ = 0.0;       // General offset
  GreenDistribution dist_ = GreenDistribution::uniform(1.0);
};

inline double el_velocity(const ELCurve& curve, double t) {
  return curve.velocity(t);
}

// Residual of v_dot + (ln f)' v - (ln f)' v_max + alpha along the curve.
// (ln f)' is analytic for the Uniform/Exponential families and a central
// difference with step 1e-5 * max(1, t) for tabulated distributions.
double el_ode_residual(const ELCurve& curve, const GreenDistribution& dist,
                       double t);

// Velocity where the Exponential EL slope equals -beta:
//   v_beta = v_max + (alpha - beta) / lambda.
// May fall outside [0, v_max]; interpretation is the caller's business.
// Rejects non-Exponential distributions (Uniform EL slope is constantly
// -alpha, which never passes -beta once beta >= alpha).
double v_beta(const ProblemSpec& p);

// Distance covered descending an Exponential EL curve from v_hi to v_lo:
//   (A/lambda) ln((A - v_lo)/(A - v_hi)) - (v_hi - v_lo)/lambda.
// Requires v_lo <= v_hi < A.
double el_distance(double v_hi, double v_lo, double lambda, double A);

// Verifies that curve2 is a time translate of curve1: computes the shift
// (Exponential: ln(b2/b1)/lambda; Uniform: q (B2 - B1)/alpha) and returns the
// max |v2(t) - v1(t + shift)| over the grid.
double el_translation_check(const ELCurve& curve1, const ELCurve& curve2,
                            std::span<const double> grid);

}  // namespace redlight
