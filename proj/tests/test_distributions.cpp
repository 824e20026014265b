#include <doctest.h>

#include <cmath>
#include <random>

#include "redlight/distributions.hpp"
#include "redlight/quadrature.hpp"

using namespace redlight;

TEST_CASE("uniform pdf/cdf closed forms") {
  const auto u = GreenDistribution::uniform(2.0);
  CHECK(u.pdf(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(u.cdf(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(u.pdf(2.0) == 0.0);
  CHECK(u.pdf(5.0) == 0.0);
  CHECK(u.cdf(5.0) == 1.0);
  CHECK(u.q_support() == 2.0);
  CHECK(u.density_bound() == doctest::Approx(0.5));
}

TEST_CASE("exponential pdf/cdf closed forms") {
  const auto e = GreenDistribution::exponential(0.1);
  CHECK(e.pdf(0.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(e.pdf(10.0) == doctest::Approx(0.1 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(e.cdf(0.0) == 0.0);
  CHECK(e.cdf(1e6) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.unbounded());
  CHECK(e.horizon() == doctest::Approx(280.0));
  CHECK(1.0 - e.cdf(e.horizon()) < 1e-12);
}

TEST_CASE("excess of a point mass at q is Uniform(0, q)") {
  const double q = 3.0;
  const auto d = GreenDistribution::excess_of_renewal(
      {{0.0, 0.0}, {q, 0.0}, {q, 1.0}}, q);
  CHECK(d.q_support() == doctest::Approx(q));
  const auto u = GreenDistribution::uniform(q);
  for (int i = 0; i < 500; ++i) {
    const double t = q * i / 500.0;
    CHECK(std::abs(d.pdf(t) - u.pdf(t)) < 1e-9);
  }
  CHECK(d.cdf(1.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("excess point mass: f(0.5) = 1 for q = 1") {
  const auto d = GreenDistribution::excess_of_renewal(
      {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}, 1.0);
  CHECK(d.pdf(0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("excess of exponential interarrivals recovers the exponential") {
  // Theta(x) = 1 - e^{-x}, tabulated densely; mean 1.
  std::vector<std::pair<double, double>> knots;
  const int n = 20000;
  const double x_hi = 30.0;
  for (int i = 0; i <= n; ++i) {
    const double x = x_hi * i / n;
    knots.emplace_back(x, -std::expm1(-x));
  }
  knots.emplace_back(x_hi, 1.0);
  const auto d = GreenDistribution::excess_of_renewal(knots, 1.0);
  for (double t : {0.0, 0.3, 1.0, 2.5, 5.0}) {
    CHECK(std::abs(d.pdf(t) - std::exp(-t)) < 1e-6);
    CHECK(std::abs(d.cdf(t) - (-std::expm1(-t))) < 1e-6);
  }
}

TEST_CASE("excess rejects bad inputs") {
  CHECK_THROWS(GreenDistribution::excess_of_renewal(
      {{0.0, 0.0}, {1.0, 0.6}, {2.0, 0.5}, {3.0, 1.0}}, 1.0));
  CHECK_THROWS(GreenDistribution::excess_of_renewal(
      {{0.0, 0.0}, {1.0, 1.0}}, 0.0));
  CHECK_THROWS(GreenDistribution::excess_of_renewal(
      {{0.0, 0.0}, {1.0, 1.0}}, -2.0));
}

TEST_CASE("validate_density: closed forms are clean") {
  CHECK(validate_density(GreenDistribution::uniform(5.0), 1000).ok());
  CHECK(validate_density(GreenDistribution::exponential(1.0), 1000).ok());
}

TEST_CASE("validate_density flags an increasing step") {
  const auto d = GreenDistribution::from_density_table(
      {0.0, 1.0, 2.0, 3.0}, {1.0, 0.5, 0.8, 0.1});
  const auto report = validate_density(d, 300);
  CHECK_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations)
    if (v.what == "increasing" && v.t > 1.0 && v.t < 2.1) found = true;
  CHECK(found);
}

TEST_CASE("density is non-increasing and cdf integrates pdf") {
  const auto excess = GreenDistribution::excess_of_renewal(
      {{0.0, 0.0}, {1.0, 0.3}, {2.0, 0.7}, {4.0, 1.0}}, 1.8);
  const GreenDistribution dists[] = {GreenDistribution::uniform(7.0),
                                     GreenDistribution::exponential(0.35),
                                     excess};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& d : dists) {
    const double hi = std::min(d.q_support(), d.horizon());
    for (int i = 0; i < 200; ++i) {
      double t1 = unit(rng) * hi;
      double t2 = unit(rng) * hi;
      if (t1 > t2) std::swap(t1, t2);
      CHECK(d.pdf(t2) <= d.pdf(t1) + 1e-12);
    }
    for (int i = 0; i < 20; ++i) {
      const double t = unit(rng) * hi;
      const double numeric =
          integrate([&](double s) { return d.pdf(s); }, 0.0, t, 1e-10);
      CHECK(std::abs(d.cdf(t) - numeric) < 1e-6);
    }
  }
}

TEST_CASE("cdf is consistent with pdf under differentiation") {
  const GreenDistribution dists[] = {GreenDistribution::uniform(4.0),
                                     GreenDistribution::exponential(0.5)};
  for (const auto& d : dists) {
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
      const double h = 1e-6;
      const double deriv = (d.cdf(t + h) - d.cdf(t - h)) / (2.0 * h);
      CHECK(std::abs(deriv - d.pdf(t)) < 1e-6);
    }
  }
}

TEST_CASE("inverse_cdf inverts cdf") {
  const auto excess = GreenDistribution::excess_of_renewal(
      {{0.0, 0.0}, {2.0, 0.5}, {3.0, 1.0}}, 1.6);
  const GreenDistribution dists[] = {GreenDistribution::uniform(4.0),
                                     GreenDistribution::exponential(0.5),
                                     excess};
  for (const auto& d : dists) {
    for (double u : {0.01, 0.2, 0.5, 0.77, 0.999}) {
      CHECK(d.cdf(d.inverse_cdf(u)) == doctest::Approx(u).epsilon(1e-7));
    }
  }
}
