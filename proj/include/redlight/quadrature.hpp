#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace redlight {

// Adaptive Gauss(7)/Kronrod(15) integration. The Kronrod value is returned,
// the |G7-K15| difference drives interval subdivision. Node/weight constants
// are the standard QUADPACK values.
namespace gk {

inline constexpr double kAbscissae[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> rule(const F& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  double kres = 0.0;
  double gres = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double x = h * kAbscissae[i];
    double fsum;
    if (i == 7) {
      fsum = f(c);
    } else {
      fsum = f(c - x) + f(c + x);
    }
    kres += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gres += kGaussWeights[i / 2] * fsum;
  }
  kres *= h;
  gres *= h;
  return {kres, std::abs(kres - gres)};
}

}  // namespace gk

// Integrates f over [a,b] to absolute tolerance abs_tol, recursing on the
// GK error estimate. max_depth bounds the subdivision (2^depth intervals).
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-9,
                 int max_depth = 48) {
  if (a == b) return 0.0;
  struct Frame {
    double a, b, tol;
    int depth;
  };
  std::vector<Frame> stack;
  stack.push_back({a, b, abs_tol, 0});
  double total = 0.0;
  while (!stack.empty()) {
    const Frame fr = stack.back();
    stack.pop_back();
    auto [val, err] = gk::rule(f, fr.a, fr.b);
    if (err <= fr.tol || fr.depth >= max_depth) {
      total += val;
      continue;
    }
    const double m = 0.5 * (fr.a + fr.b);
    stack.push_back({fr.a, m, 0.5 * fr.tol, fr.depth + 1});
    stack.push_back({m, fr.b, 0.5 * fr.tol, fr.depth + 1});
  }
  return total;
}

// Same, but splits the domain at the supplied interior breakpoints first so
// the adaptive rule only ever sees smooth pieces.
template <class F>
double integrate_split(const F& f, double a, double b,
                       std::span<const double> breakpoints,
                       double abs_tol = 1e-9, int max_depth = 48) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double t : breakpoints) {
    if (t > a && t < b) pts.push_back(t);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  const double piece_tol = abs_tol / static_cast<double>(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i])
      total += integrate(f, pts[i], pts[i + 1], piece_tol, max_depth);
  }
  return total;
}

}  // namespace redlight
