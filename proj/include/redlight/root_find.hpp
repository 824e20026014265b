#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace redlight {

// Bracketing root finder: bisection safeguarded with secant steps.
// Requires f(lo) and f(hi) of opposite sign. Converges to relative
// tolerance rel_tol on the abscissa.
template <class F>
double solve_bracketed(const F& f, double lo, double hi,
                       double rel_tol = 1e-12, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("solve_bracketed: endpoints do not bracket a root");
  for (int it = 0; it < max_iter; ++it) {
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
    if (hi - lo <= rel_tol * scale) break;
    // Secant candidate, accepted only if it lands safely inside the bracket.
    double mid = 0.5 * (lo + hi);
    const double denom = fhi - flo;
    if (denom != 0.0) {
      const double sec = (lo * fhi - hi * flo) / denom;
      const double margin = 0.01 * (hi - lo);
      if (sec > lo + margin && sec < hi - margin) mid = sec;
    }
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

// Monotone bisection for g(x) = target with non-decreasing g. If the bracket
// does not straddle the target, returns the endpoint with the smaller
// residual (degenerate boundary instances land here).
template <class G>
double solve_monotone(const G& g, double lo, double hi, double target,
                      double rel_tol = 1e-12, int max_iter = 200) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo > target && ghi > target) return std::abs(glo - target) < std::abs(ghi - target) ? lo : hi;
  if (glo < target && ghi < target) return std::abs(glo - target) < std::abs(ghi - target) ? hi : lo;
  for (int it = 0; it < max_iter; ++it) {
    const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
    if (hi - lo <= rel_tol * scale) break;
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace redlight
