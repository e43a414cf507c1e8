#pragma once

// Intersections of y = Phi(x) + u with x = Phi(y) + v.  For q = 3, the first
// order conditions say the coordinate pairs (x_i, y_i) of a critical point all
// lie on this curve system for a common (u, v).

#include <array>
#include <optional>
#include <vector>

namespace cwp {

using CurvePoint = std::array<double, 2>;

struct IntersectionQuadruple {
  double u = 0.0;
  double v = 0.0;
  // Sorted by first coordinate.  With four points the labels are P, R, Q, S in
  // that order; with two they are P, Q.
  std::vector<CurvePoint> points;

  std::optional<CurvePoint> p() const;
  std::optional<CurvePoint> r() const;
  std::optional<CurvePoint> q() const;
  std::optional<CurvePoint> s() const;
};

// Roots of Phi(x) + u = x, ascending.  Empty below the tangency shift, one root
// (x = 1/beta) at it, two above.
std::vector<double> diagonal_intersections(double beta, double j, double u);

// The shift at which y = Phi(x) + u touches y = x.
double tangency_shift(double beta, double j);

// Smallest shift u = v at which the off-diagonal pair (R, S) appears, i.e. where
// Phi'(Q) = -1.  Only defined for J < 1.
double four_point_threshold(double beta, double j);

// All intersections.  When u == v the diagonal and mirror pairs are solved
// separately; otherwise the curve system is scanned and refined.
IntersectionQuadruple offdiagonal_intersections(double beta, double j, double u, double v);

struct SumDiagnostics {
  std::optional<double> two_p_plus_q;
  std::optional<double> p_plus_two_q;
  std::optional<double> p_r_s;
  std::optional<double> r_s_q;
  std::optional<double> p_s_q;
  std::optional<double> p2_r2_s2;
  std::optional<double> r1_s1_q1;
  std::optional<double> p1_s1_q1;
  std::optional<double> p2_r2_q2;
};

// With u == v the unsubscripted sums use the scalar labels P, R, S, Q of the
// diagonal parametrization (R = (R, S), S = (S, R)).
SumDiagnostics sum_diagnostics(double beta, double j, double u, double v);

struct PrsMinimum {
  // (1+J)(2+J) / (beta (1-2J)(1+3J)); absent for J >= 1/2.
  std::optional<double> closed_form;
  // Minimum of (P+R+S)(u) over a u-grid covering the four-point regime.
  std::optional<double> grid_minimum;
  bool j_out_of_range = false;
  bool exceeds_one = false;
};

// exceeds_one is the closed-form test; j >= 1/2 gives exceeds_one = true with
// j_out_of_range set.  grid_points <= 0 skips the direct minimization.
PrsMinimum prs_minimum_exceeds_one(double beta, double j, int grid_points = 400);

// (P+R+S)(u) on the u = v four-point branch, or nullopt below the threshold.
std::optional<double> prs_sum(double beta, double j, double u);

}  // namespace cwp
