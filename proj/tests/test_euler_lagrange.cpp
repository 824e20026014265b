#include <doctest.h>

#include <cmath>
#include <random>

#include "redlight/euler_lagrange.hpp"
#include "redlight/quadrature.hpp"

using namespace redlight;

namespace {
ProblemSpec exp_problem(double alpha, double beta, double v_max, double lam) {
  return ProblemSpec{alpha, beta, v_max, 0.0, 1000.0, 8000.0,
                     GreenDistribution::exponential(lam)};
}
}  // namespace

TEST_CASE("el_velocity closed forms") {
  // Exponential curve through v(0) = v0.
  const double v0 = 140.0;
  const auto c1 =
      ELCurve::exponential_from_coeff(200.0 - v0 + 60.0, 6.0, 200.0, 0.1);
  CHECK(el_velocity(c1, 0.0) == doctest::Approx(v0).epsilon(1e-14));

  const auto c2 = ELCurve::uniform_from_offset(0.0, 6.0, 200.0, 50.0);
  CHECK(el_velocity(c2, 0.0) == doctest::Approx(200.0));

  const auto c3 = ELCurve::exponential_from_coeff(200.0, 6.0, 200.0, 0.1);
  CHECK(c3.A() == doctest::Approx(260.0));
  CHECK(el_velocity(c3, 0.0) == doctest::Approx(60.0));
}

TEST_CASE("offset form round-trips through coefficient form") {
  const auto c = ELCurve::exponential_from_offset(14.0, 6.0, 200.0, 0.1);
  CHECK(c.coeff_b() == doctest::Approx((6.0 + 14.0) / 0.1));
  CHECK(c.offset_B() == doctest::Approx(14.0).epsilon(1e-14));

  const auto u = ELCurve::uniform_from_offset(0.5, 6.0, 200.0, 50.0);
  CHECK(u.offset_B() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("el_ode_residual vanishes on both closed-form families") {
  const auto ue = GreenDistribution::uniform(50.0);
  const auto ee = GreenDistribution::exponential(0.1);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = 20.0 * unit(rng);
    const auto ce = ELCurve::exponential_from_coeff(10.0 + 300.0 * unit(rng),
                                                    6.0, 200.0, 0.1);
    CHECK(std::abs(el_ode_residual(ce, ee, t)) <= 1e-9);
    const auto cu =
        ELCurve::uniform_from_offset(unit(rng), 6.0, 200.0, 50.0);
    CHECK(std::abs(el_ode_residual(cu, ue, t)) <= 1e-9);
  }
}

TEST_CASE("the whole exponential family solves the ODE") {
  const auto ee = GreenDistribution::exponential(0.1);
  const auto base = ELCurve::exponential_from_coeff(200.0, 6.0, 200.0, 0.1);
  const auto scaled =
      ELCurve::exponential_from_coeff(202.0, 6.0, 200.0, 0.1);
  for (double t : {0.1, 1.0, 3.0})
    CHECK(std::abs(el_ode_residual(scaled, ee, t)) <= 1e-9);
  (void)base;
}

TEST_CASE("v_beta closed form and edge values") {
  CHECK(v_beta(exp_problem(6.0, 20.0, 200.0, 0.1)) == doctest::Approx(60.0));
  CHECK(v_beta(exp_problem(6.0, 6.0, 200.0, 0.1)) == doctest::Approx(200.0));
  CHECK(v_beta(exp_problem(6.0, 6.0 + 0.1 * 200.0, 200.0, 0.1)) ==
        doctest::Approx(0.0));
  ProblemSpec uni{6.0, 20.0, 200.0, 0.0, 100.0, 8000.0,
                  GreenDistribution::uniform(10.0)};
  CHECK_THROWS(v_beta(uni));
}

TEST_CASE("el_distance closed form against a frozen high-precision value") {
  CHECK(el_distance(200.0, 200.0, 0.1, 260.0) == 0.0);
  CHECK(el_distance(200.0, 86.94, 0.1, 260.0) ==
        doctest::Approx(1623.5638616868794).epsilon(1e-14));
  CHECK_THROWS(el_distance(260.0, 100.0, 0.1, 260.0));
  CHECK_THROWS(el_distance(50.0, 100.0, 0.1, 260.0));
}

TEST_CASE("el_distance matches the quadrature of the EL velocity") {
  // Curve through v(0) = 200 with A = 260: descend to 86.94.
  const double lam = 0.1, A = 260.0;
  const auto c = ELCurve::exponential_from_coeff(60.0, 6.0, 200.0, lam);
  const double t_lo = std::log((A - 86.94) / 60.0) / lam;
  const double numeric =
      integrate([&](double t) { return el_velocity(c, t); }, 0.0, t_lo, 1e-10);
  CHECK(std::abs(numeric - el_distance(200.0, 86.94, lam, A)) < 1e-8);
}

TEST_CASE("el_distance is additive") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double A = 220.0 + 100.0 * unit(rng);
    const double lam = 0.05 + unit(rng);
    double v[3] = {200.0 * unit(rng), 200.0 * unit(rng), 200.0 * unit(rng)};
    std::sort(v, v + 3);
    const double whole = el_distance(v[2], v[0], lam, A);
    const double split =
        el_distance(v[2], v[1], lam, A) + el_distance(v[1], v[0], lam, A);
    CHECK(std::abs(whole - split) <= 1e-10 * std::max(1.0, std::abs(whole)));
  }
}

TEST_CASE("exponential EL slope equals -lambda (A - v), -beta at v_beta") {
  const double lam = 0.1, alpha = 6.0, v_max = 200.0, beta = 20.0;
  const double A = v_max + alpha / lam;
  const double vb = v_max + (alpha - beta) / lam;
  const auto c = ELCurve::exponential_from_coeff(60.0, alpha, v_max, lam);
  const double t_at_vb = std::log((A - vb) / 60.0) / lam;
  CHECK(c.slope(t_at_vb) == doctest::Approx(-beta).epsilon(1e-12));
  for (double t : {0.0, 2.0, 5.0}) {
    CHECK(c.slope(t) ==
          doctest::Approx(-lam * (A - c.velocity(t))).epsilon(1e-12));
  }
}

TEST_CASE("el_translation_check: family members are time translates") {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(0.3 * i);

  const auto e1 = ELCurve::exponential_from_coeff(50.0, 6.0, 200.0, 0.1);
  CHECK(el_translation_check(e1, e1, grid) == 0.0);

  const auto e2 = ELCurve::exponential_from_coeff(
      50.0 * std::exp(0.1), 6.0, 200.0, 0.1);
  CHECK(el_translation_check(e1, e2, grid) <= 1e-9);

  const auto u1 = ELCurve::uniform_from_offset(0.2, 6.0, 200.0, 50.0);
  const auto u2 = ELCurve::uniform_from_offset(0.2 + 6.0 / 50.0, 6.0, 200.0, 50.0);
  CHECK(el_translation_check(u1, u2, grid) <= 1e-9);
}

TEST_CASE("general-family curve matches the exponential closed form") {
  const auto dist = GreenDistribution::exponential(0.1);
  const double B = 14.0;
  const auto gen = ELCurve::general_from_offset(B, 6.0, 200.0, dist);
  const auto cf = ELCurve::exponential_from_offset(B, 6.0, 200.0, 0.1);
  for (double t : {0.0, 1.0, 5.0, 12.0})
    CHECK(gen.velocity(t) == doctest::Approx(cf.velocity(t)).epsilon(1e-10));
}
