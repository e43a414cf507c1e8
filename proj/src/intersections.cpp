#include "cwp/intersections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/lambert_w.hpp>

#include "cwp/model.hpp"
#include "cwp/roots.hpp"
#include "cwp/scalar.hpp"

namespace cwp {
namespace {

constexpr int kScanPoints = 2000;
constexpr double kMergeTol = 1e-9;

void require_positive(double beta, double j) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  if (!(j > 0.0) || !std::isfinite(j)) throw DomainError("the curve system needs 0 < J < inf");
}

// x - Phi(x); convex with minimum at 1/beta.
double diagonal_gap(double x, double beta, double j) { return x - phi(x, beta, j); }

// Solve e^l - c l = r for l on the branch left (or right) of l = log c.
// r >= c - c log c is assumed; below it the branch point is returned.
double invert_branch(double r, double c, bool right) {
  const double z_scaled = -r / c;
  if (!right && z_scaled < -700.0) {
    double l = z_scaled;
    for (int i = 0; i < 4; ++i) l = (std::exp(l) - r) / c;
    return l;
  }
  double z = -std::exp(z_scaled) / c;
  const double branch_point = -std::exp(-1.0);
  if (z <= branch_point) return std::log(c);
  const double w = right ? boost::math::lambert_wm1(z) : boost::math::lambert_w0(z);
  return std::log(-c * w);
}

struct Residual {
  double r1;
  double r2;
};

Residual curve_residual(double beta, double j, double u, double v, const CurvePoint& p) {
  return {phi(p[0], beta, j) + u - p[1], phi(p[1], beta, j) + v - p[0]};
}

// A few Newton steps on the 2x2 system; accepted only while the residual shrinks.
CurvePoint polish(double beta, double j, double u, double v, CurvePoint p) {
  auto norm = [](const Residual& r) { return std::hypot(r.r1, r.r2); };
  Residual res = curve_residual(beta, j, u, v, p);
  for (int it = 0; it < 8 && norm(res) > 0.0; ++it) {
    const double a = phi_prime(p[0], beta, j);
    const double d = phi_prime(p[1], beta, j);
    const double det = a * d - 1.0;
    if (det == 0.0) break;
    // Jacobian [[a, -1], [-1, d]] applied to the step equals -res.
    const double dx = (-res.r1 * d - res.r2) / det;
    const double dy = (-res.r2 * a - res.r1) / det;
    CurvePoint trial{p[0] + dx, p[1] + dy};
    if (!(trial[0] > 0.0 && trial[1] > 0.0)) break;
    const Residual trial_res = curve_residual(beta, j, u, v, trial);
    if (!(norm(trial_res) < norm(res))) break;
    p = trial;
    res = trial_res;
  }
  return p;
}

void sort_and_merge(std::vector<CurvePoint>& pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<CurvePoint> out;
  for (const auto& p : pts) {
    if (!out.empty() && std::abs(out.back()[0] - p[0]) < kMergeTol &&
        std::abs(out.back()[1] - p[1]) < kMergeTol) {
      continue;
    }
    out.push_back(p);
  }
  pts = std::move(out);
}

// The mirror pair (R, S), R < S, on the u = v system.  With lambda = log(S/R),
// subtracting the two curve equations gives R = c lambda / ((1-J) expm1(lambda)),
// and u is increasing in lambda from the four-point threshold.
std::optional<CurvePoint> mirror_pair(double beta, double j, double u) {
  if (!(j < 1.0)) return std::nullopt;
  const double c = (1.0 + j) / beta;
  auto pair_at = [&](double lambda) {
    const double r = c * lambda / ((1.0 - j) * std::expm1(lambda));
    return CurvePoint{r, r * std::exp(lambda)};
  };
  auto shift_at = [&](double lambda) {
    const CurvePoint p = pair_at(lambda);
    return p[1] - phi(p[0], beta, j);
  };
  if (!(u > four_point_threshold(beta, j))) return std::nullopt;
  double hi = 1.0;
  while (shift_at(hi) < u) {
    hi *= 2.0;
    if (hi > 1e6) return std::nullopt;
  }
  const double lambda =
      bisect_with_signs([&](double l) { return shift_at(l) - u; }, 0.0, hi, -1, 0.0);
  if (!(lambda > 0.0)) return std::nullopt;
  return pair_at(lambda);
}

std::vector<CurvePoint> scan_general(double beta, double j, double u, double v) {
  const double c = (1.0 + j) / beta;
  const double gmin = c - c * std::log(c);
  const double top = u - gmin / j;
  std::vector<CurvePoint> found;
  if (!(top > 0.0)) return found;
  const double m_hi = std::log(top);
  const double m_lo = std::min(-j * v / c - 1.0, m_hi - 1.0);

  for (bool right : {false, true}) {
    auto ell = [&](double m) { return invert_branch(j * (u - std::exp(m)), c, right); };
    auto residual = [&](double m) {
      return j * std::exp(ell(m)) + std::exp(m) - c * m - j * v;
    };
    double prev_m = m_lo;
    double prev_r = residual(m_lo);
    for (int i = 1; i <= kScanPoints; ++i) {
      const double m = (i == kScanPoints) ? m_hi : m_lo + (m_hi - m_lo) * i / kScanPoints;
      const double r = residual(m);
      if (r == 0.0 || (prev_r > 0.0) != (r > 0.0)) {
        double root = m;
        if (r != 0.0) {
          root = bisect_with_signs(residual, prev_m, m, prev_r > 0.0 ? 1 : -1, 0.0);
        }
        found.push_back({std::exp(ell(root)), std::exp(root)});
      }
      prev_m = m;
      prev_r = r;
    }
  }
  return found;
}

}  // namespace

std::optional<CurvePoint> IntersectionQuadruple::p() const {
  if (points.size() == 2 || points.size() == 4) return points[0];
  return std::nullopt;
}

std::optional<CurvePoint> IntersectionQuadruple::r() const {
  if (points.size() == 4) return points[1];
  return std::nullopt;
}

std::optional<CurvePoint> IntersectionQuadruple::q() const {
  if (points.size() == 4) return points[2];
  if (points.size() == 2) return points[1];
  return std::nullopt;
}

std::optional<CurvePoint> IntersectionQuadruple::s() const {
  if (points.size() == 4) return points[3];
  return std::nullopt;
}

double tangency_shift(double beta, double j) {
  require_positive(beta, j);
  return diagonal_gap(1.0 / beta, beta, j);
}

double four_point_threshold(double beta, double j) {
  require_positive(beta, j);
  if (!(j < 1.0)) throw DomainError("the mirror pair needs J < 1");
  const double q = (1.0 + j) / (beta * (1.0 - j));
  return diagonal_gap(q, beta, j);
}

std::vector<double> diagonal_intersections(double beta, double j, double u) {
  require_positive(beta, j);
  const double xm = 1.0 / beta;
  const double u_star = diagonal_gap(xm, beta, j);
  const double scale = std::max(1.0, std::abs(u));
  if (u < u_star - 1e-14 * scale) return {};
  if (u <= u_star + 1e-14 * scale) return {xm};

  auto f = [&](double lx) { return diagonal_gap(std::exp(lx), beta, j) - u; };
  const double lm = std::log(xm);
  double lo = lm - 1.0;
  while (f(lo) <= 0.0) lo = lm + 2.0 * (lo - lm);
  double hi = lm + 1.0;
  while (f(hi) <= 0.0) hi = lm + 2.0 * (hi - lm);
  const double p = std::exp(bisect_with_signs(f, lo, lm, +1, 0.0));
  const double q = std::exp(bisect_with_signs(f, lm, hi, -1, 0.0));
  return {p, q};
}

IntersectionQuadruple offdiagonal_intersections(double beta, double j, double u, double v) {
  require_positive(beta, j);
  IntersectionQuadruple out;
  out.u = u;
  out.v = v;
  if (u == v) {
    for (double x : diagonal_intersections(beta, j, u)) out.points.push_back({x, x});
    if (auto rs = mirror_pair(beta, j, u)) {
      out.points.push_back(polish(beta, j, u, v, *rs));
      out.points.push_back(polish(beta, j, u, v, {(*rs)[1], (*rs)[0]}));
    }
  } else {
    for (const auto& p : scan_general(beta, j, u, v)) out.points.push_back(polish(beta, j, u, v, p));
  }
  sort_and_merge(out.points);
  return out;
}

SumDiagnostics sum_diagnostics(double beta, double j, double u, double v) {
  const IntersectionQuadruple quad = offdiagonal_intersections(beta, j, u, v);
  SumDiagnostics d;
  const auto P = quad.p();
  const auto Q = quad.q();
  const auto R = quad.r();
  const auto S = quad.s();
  if (u == v && P && Q) {
    d.two_p_plus_q = 2.0 * (*P)[0] + (*Q)[0];
    d.p_plus_two_q = (*P)[0] + 2.0 * (*Q)[0];
  }
  if (P && Q && R && S) {
    if (u == v) {
      // Scalars: P, Q on the diagonal, R and S the coordinates of the mirror pair.
      const double p = (*P)[0], q = (*Q)[0], r = (*R)[0], s = (*S)[0];
      d.p_r_s = p + r + s;
      d.r_s_q = r + s + q;
      d.p_s_q = p + s + q;
    }
    d.p2_r2_s2 = (*P)[1] + (*R)[1] + (*S)[1];
    d.r1_s1_q1 = (*R)[0] + (*S)[0] + (*Q)[0];
    d.p1_s1_q1 = (*P)[0] + (*S)[0] + (*Q)[0];
    d.p2_r2_q2 = (*P)[1] + (*R)[1] + (*Q)[1];
  }
  return d;
}

std::optional<double> prs_sum(double beta, double j, double u) {
  if (!(j < 1.0)) return std::nullopt;
  auto rs = mirror_pair(beta, j, u);
  if (!rs) return std::nullopt;
  const auto diag = diagonal_intersections(beta, j, u);
  if (diag.size() != 2) return std::nullopt;
  return diag[0] + (*rs)[0] + (*rs)[1];
}

PrsMinimum prs_minimum_exceeds_one(double beta, double j, int grid_points) {
  require_positive(beta, j);
  PrsMinimum out;
  if (j >= 0.5) {
    out.j_out_of_range = true;
    out.exceeds_one = true;
  } else {
    out.closed_form = (1.0 + j) * (2.0 + j) / (beta * (1.0 - 2.0 * j) * (1.0 + 3.0 * j));
    out.exceeds_one = *out.closed_form > 1.0;
  }
  if (grid_points > 0 && j < 1.0) {
    // Geometric offsets above the threshold, in units of (1+J)/beta, then a
    // golden-section refinement around the best node.
    const double u4 = four_point_threshold(beta, j);
    const double c = (1.0 + j) / beta;
    const double lo_off = 1e-8, hi_off = 50.0;
    auto offset = [&](int i) {
      return lo_off * std::pow(hi_off / lo_off, static_cast<double>(i) / (grid_points - 1));
    };
    auto value = [&](double off) {
      auto s = prs_sum(beta, j, u4 + c * off);
      return s ? *s : std::numeric_limits<double>::infinity();
    };
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
      const double val = value(offset(i));
      if (val < best_val) {
        best_val = val;
        best = i;
      }
    }
    if (std::isfinite(best_val)) {
      double a = offset(std::max(best - 1, 0));
      double b = offset(std::min(best + 1, grid_points - 1));
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int it = 0; it < 80 && b - a > 1e-14 * b; ++it) {
        const double x1 = b - g * (b - a);
        const double x2 = a + g * (b - a);
        if (value(x1) < value(x2)) {
          b = x2;
        } else {
          a = x1;
        }
      }
      out.grid_minimum = std::min(best_val, value(0.5 * (a + b)));
    }
  }
  return out;
}

}  // namespace cwp
