#include "redlight/euler_lagrange.hpp"

#include <cmath>
#include <stdexcept>

namespace redlight {

ELCurve ELCurve::uniform_from_offset(double B, double alpha, double v_max,
                                     double q) {
  return uniform_from_intercept(v_max - q * B, alpha, v_max, q);
}

ELCurve ELCurve::uniform_from_intercept(double c, double alpha, double v_max,
                                        double q) {
  ELCurve e;
  e.family_ = Family::Uniform;
  e.alpha_ = alpha;
  e.v_max_ = v_max;
  e.q_ = q;
  e.c_ = c;
  return e;
}

ELCurve ELCurve::exponential_from_coeff(double b, double alpha, double v_max,
                                        double lambda) {
  ELCurve e;
  e.family_ = Family::Exponential;
  e.alpha_ = alpha;
  e.v_max_ = v_max;
  e.lambda_ = lambda;
  e.b_ = b;
  return e;
}

ELCurve ELCurve::exponential_from_offset(double B, double alpha, double v_max,
                                         double lambda) {
  return exponential_from_coeff((alpha + B) / lambda, alpha, v_max, lambda);
}

ELCurve ELCurve::exponential_through(double t, double v, double alpha,
                                     double v_max, double lambda) {
  const double A = v_max + alpha / lambda;
  return exponential_from_coeff((A - v) * std::exp(-lambda * t), alpha, v_max,
                                lambda);
}

ELCurve ELCurve::general_from_offset(double B, double alpha, double v_max,
                                     GreenDistribution dist) {
  ELCurve e;
  e.family_ = Family::General;
  e.alpha_ = alpha;
  e.v_max_ = v_max;
  e.B_ = B;
  e.dist_ = std::move(dist);
  return e;
}

double ELCurve::offset_B() const {
  switch (family_) {
    case Family::Uniform:
      return (v_max_ - c_) / q_;
    case Family::Exponential:
      return lambda_ * b_ - alpha_;
    case Family::General:
      return B_;
  }
  return 0.0;
}

double ELCurve::velocity(double t) const {
  switch (family_) {
    case Family::Uniform:
      return c_ - alpha_ * t;
    case Family::Exponential:
      return A() - b_ * std::exp(lambda_ * t);
    case Family::General: {
      const double f = dist_.pdf(t);
      return v_max_ - (B_ + alpha_ * dist_.cdf(t)) / f;
    }
  }
  return 0.0;
}

double ELCurve::slope(double t) const {
  switch (family_) {
    case Family::Uniform:
      return -alpha_;
    case Family::Exponential:
      return -lambda_ * b_ * std::exp(lambda_ * t);
    case Family::General: {
      const double h = 1e-6 * std::max(1.0, t);
      return (velocity(t + h) - velocity(t - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

double el_ode_residual(const ELCurve& curve, const GreenDistribution& dist,
                       double t) {
  double dlnf;
  switch (dist.kind()) {
    case GreenDistribution::Kind::Uniform:
      dlnf = 0.0;
      break;
    case GreenDistribution::Kind::Exponential:
      dlnf = -dist.lambda();
      break;
    case GreenDistribution::Kind::Excess: {
      const double h = 1e-5 * std::max(1.0, t);
      const double fm = dist.pdf(t - h);
      const double fp = dist.pdf(t + h);
      if (!(fm > 0.0) || !(fp > 0.0))
        throw std::domain_error("el_ode_residual: density not positive at t");
      dlnf = (std::log(fp) - std::log(fm)) / (2.0 * h);
      break;
    }
    default:
      dlnf = 0.0;
  }
  const double v = curve.velocity(t);
  const double vdot = curve.slope(t);
  return vdot + dlnf * v - dlnf * curve.v_max() + curve.alpha();
}

double v_beta(const ProblemSpec& p) {
  if (p.dist.kind() != GreenDistribution::Kind::Exponential)
    throw std::invalid_argument("v_beta: defined for Exponential distributions only");
  return p.v_max + (p.alpha - p.beta) / p.dist.lambda();
}

double el_distance(double v_hi, double v_lo, double lambda, double A) {
  if (v_hi >= A)
    throw std::invalid_argument("el_distance: v_hi must be below the asymptote A");
  if (v_lo > v_hi)
    throw std::invalid_argument("el_distance: needs v_lo <= v_hi");
  return (A / lambda) * std::log((A - v_lo) / (A - v_hi)) -
         (v_hi - v_lo) / lambda;
}

double el_translation_check(const ELCurve& curve1, const ELCurve& curve2,
                            std::span<const double> grid) {
  if (curve1.family() != curve2.family())
    throw std::invalid_argument("el_translation_check: mixed families");
  double shift;
  switch (curve1.family()) {
    case ELCurve::Family::Exponential:
      shift = std::log(curve2.coeff_b() / curve1.coeff_b()) / curve1.lambda();
      break;
    case ELCurve::Family::Uniform:
      shift = curve1.q() * (curve2.offset_B() - curve1.offset_B()) /
              curve1.alpha();
      break;
    default:
      throw std::invalid_argument(
          "el_translation_check: closed-form families only");
  }
  double worst = 0.0;
  for (double t : grid) {
    worst = std::max(worst,
                     std::abs(curve2.velocity(t) - curve1.velocity(t + shift)));
  }
  return worst;
}

}  // namespace redlight
