#pragma once

// One-dimensional curves whose intersections and slopes determine the critical
// points of the q = 2 and q = 3 landscapes, and the constants derived from them.

namespace cwp {

// Theta(s) = (1/J)(-s + ((1+J)/beta) log((1+s)/(1-s))) on |s| < 1, J > 0.
double theta(double s, double beta, double j);
double theta_prime(double s, double beta, double j);

// Phi(x) = (1/J)(-x + ((1+J)/beta) log x) on x > 0, J > 0.  Concave, maximal at
// x = (1+J)/beta, slope 1 at x = 1/beta.
double phi(double x, double beta, double j);
double phi_prime(double x, double beta, double j);

// Psi(x) = (1/(3J))(1 - 3x + ((1+J)/beta) log(x/(1-2x)) + J) on 0 < x < 1/2.
// Passes through (1/3, 1/3); Psi(x) = x exactly when xi(x) = beta.
double psi_fn(double x, double beta, double j);
double psi_fn_prime(double x, double beta, double j);

// xi(x) = log((1-2x)/x) / (1-3x) on (0, 1/2), continuous at 1/3 with xi(1/3) = 3.
double xi(double x);
double xi_prime(double x);

struct CriticalConstants {
  double m1;     // argmin of xi
  double beta1;  // xi(m1)
  double beta2;  // 4 log 2
  double beta3;  // 3
  double jc;     // positive root of (1+x)(1/(1-x) - 1/(2+x)) - log((2+x)/(1-x))
};

// Computed once on first use.
const CriticalConstants& critical_constants();

// The function whose positive root is J_c.
double jc_function(double x);

// Two solutions x_s < m1 < x_l of xi(x) = beta.
struct BranchPair {
  double x_s;
  double x_l;
  double beta;
};

// Throws SolverError when beta <= beta1 (no solution), or when x_s underflows.
BranchPair solve_branches(double beta);

// x_l alone; rounds to the largest double below 1/2 once beta is in the hundreds.
double solve_large_branch(double beta);

// f(x) = (x/2) log((1+x)/(1-x)) - 2[((1+x)/2) log((1+x)/2) + ((1-x)/2) log((1-x)/2)];
// compares the diagonal and antidiagonal minima of the q = 2 landscape.
double f_compare(double x);

// F~(x) = -6x^2 + 4x - 2/3 + (2/xi(x))(2x log x + (1-2x) log(1-2x) + log 3);
// the gap between the S^2 family at x and the uniform point, at beta = xi(x).
double f_tilde(double x);

}  // namespace cwp
