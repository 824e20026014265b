#pragma once

#include <optional>

#include "redlight/solve_report.hpp"

namespace redlight {

// Switch-velocity analysis for T ~ Exp(lambda). The optimal trajectory leaves
// the EL isobar for full braking at v_c*, the positive root of F below; when
// v_beta <= 0 no switch exists and when the root reaches v_max the optimum
// contains no EL phase at all.
struct ExpSolverState {
  double A;       // v_max + alpha / lambda
  double v_beta;  // EL slope hits -beta here
  std::optional<double> v_c_star;
  bool exceeds_vmax = false;
  double root_residual = 0.0;
};

// F(v_c) = -(lambda^2/beta) v_c^2 + (lambda/beta)(beta + lambda A) v_c
//          + (e^{-lambda v_c / beta} - 1)(beta + lambda A).
double f_of_vc(double v_c, const ProblemSpec& p);

// dv_c/dt_c along the distance constraint:
//   -lambda beta v_max (A - v_c) / (beta (v_max - v_c) + lambda (A - v_c) v_c).
double vc_prime(double v_c, const ProblemSpec& p);

// Root of F on [v_beta, inf), bracketed by geometric expansion. Empty when
// v_beta <= 0 (no EL -> beta switch exists).
ExpSolverState solve_vc_star(const ProblemSpec& p);

// Closed-form (v0, d) region label for the regime of st.
PhasePattern classify_region(double v0, double d, const ExpSolverState& st,
                             const ProblemSpec& p);

// Full solve: classify, pin the one free parameter with the distance
// constraint, assemble segments, append the terminal standstill.
SolveReport solve_exponential(const ProblemSpec& p);

}  // namespace redlight
