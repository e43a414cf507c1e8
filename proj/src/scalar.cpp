#include "cwp/scalar.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "cwp/model.hpp"
#include "cwp/roots.hpp"

namespace cwp {
namespace {

constexpr double kRootTol = 1e-12;

// Taylor coefficients of xi and xi' about x = 1/3; radius of convergence 1/6.
constexpr double kSeriesWindow = 1e-3;
constexpr std::array<double, 7> kXiSeries = {
    3.0, 4.5, 27.0, 405.0 / 4.0, 2673.0 / 5.0, 5103.0 / 2.0, 94041.0 / 7.0};
constexpr std::array<double, 7> kXiPrimeSeries = {
    4.5, 54.0, 1215.0 / 4.0, 10692.0 / 5.0, 25515.0 / 2.0, 564246.0 / 7.0, 3903795.0 / 8.0};

template <std::size_t N>
double horner(const std::array<double, N>& c, double h) {
  double acc = 0.0;
  for (std::size_t i = N; i-- > 0;) acc = acc * h + c[i];
  return acc;
}

void require_positive_j(double j) {
  if (!(j > 0.0)) throw DomainError("curve is undefined for J <= 0");
}

void require_half_open(double x, const char* name) {
  if (!(x > 0.0 && x < 0.5)) throw DomainError(std::string(name) + " needs x in (0, 1/2)");
}

}  // namespace

double theta(double s, double beta, double j) {
  require_positive_j(j);
  if (!(std::abs(s) < 1.0)) throw DomainError("theta needs |s| < 1");
  return (-s + ((1.0 + j) / beta) * (std::log1p(s) - std::log1p(-s))) / j;
}

double theta_prime(double s, double beta, double j) {
  require_positive_j(j);
  if (!(std::abs(s) < 1.0)) throw DomainError("theta needs |s| < 1");
  return (((1.0 + j) / beta) * 2.0 / (1.0 - s * s) - 1.0) / j;
}

double phi(double x, double beta, double j) {
  require_positive_j(j);
  if (!(x > 0.0)) throw DomainError("phi needs x > 0");
  return (-x + ((1.0 + j) / beta) * std::log(x)) / j;
}

double phi_prime(double x, double beta, double j) {
  require_positive_j(j);
  if (!(x > 0.0)) throw DomainError("phi needs x > 0");
  return ((1.0 + j) / (beta * x) - 1.0) / j;
}

double psi_fn(double x, double beta, double j) {
  require_positive_j(j);
  require_half_open(x, "psi");
  return (1.0 - 3.0 * x + ((1.0 + j) / beta) * std::log(x / (1.0 - 2.0 * x)) + j) / (3.0 * j);
}

double psi_fn_prime(double x, double beta, double j) {
  require_positive_j(j);
  require_half_open(x, "psi");
  return (((1.0 + j) / beta) / (3.0 * x * (1.0 - 2.0 * x)) - 1.0) / j;
}

double xi(double x) {
  require_half_open(x, "xi");
  const double h = x - 1.0 / 3.0;
  if (std::abs(h) < kSeriesWindow) return horner(kXiSeries, h);
  return std::log((1.0 - 2.0 * x) / x) / (1.0 - 3.0 * x);
}

double xi_prime(double x) {
  require_half_open(x, "xi");
  const double h = x - 1.0 / 3.0;
  if (std::abs(h) < kSeriesWindow) return horner(kXiPrimeSeries, h);
  const double num = 1.0 - 3.0 * x + 3.0 * x * (1.0 - 2.0 * x) * std::log(x / (1.0 - 2.0 * x));
  const double den = x * (2.0 * x - 1.0) * (3.0 * x - 1.0) * (3.0 * x - 1.0);
  return num / den;
}

double jc_function(double x) {
  return (1.0 + x) * (1.0 / (1.0 - x) - 1.0 / (2.0 + x)) - std::log((2.0 + x) / (1.0 - x));
}

const CriticalConstants& critical_constants() {
  static const CriticalConstants constants = [] {
    CriticalConstants c{};
    c.m1 = bisect(xi_prime, 0.1, 0.3, kRootTol, "m1");
    c.beta1 = xi(c.m1);
    c.beta2 = 4.0 * std::numbers::ln2;
    c.beta3 = 3.0;
    // jc_function(0) = 1/2 - log 2 < 0, so the left end may be taken at 0.
    c.jc = bisect(jc_function, 0.0, 0.9, kRootTol, "J_c");
    return c;
  }();
  return constants;
}

namespace {

void require_two_branches(double beta) {
  if (!std::isfinite(beta)) throw DomainError("beta must be finite");
  if (!(beta > critical_constants().beta1 + 1e-9)) {
    throw SolverError("xi(x) = beta has no two solutions for beta <= beta1");
  }
}

}  // namespace

double solve_large_branch(double beta) {
  require_two_branches(beta);
  const auto& cc = critical_constants();
  // bisect in y = log(1 - 2x); 1 - 2x drops like exp(-beta/2)
  auto residual = [&](double y) {
    const double w = std::exp(y);
    if (w > 1e-3) return xi(0.5 * (1.0 - w)) - beta;
    return std::log(2.0 * w / (1.0 - w)) / (0.5 * (3.0 * w - 1.0)) - beta;
  };
  const double y_hi = std::log1p(-2.0 * cc.m1);
  double y_lo = y_hi;
  while (residual(y_lo) < 0.0) y_lo = 2.0 * y_lo - 1.0;
  const double y = bisect_with_signs(residual, y_lo, y_hi, +1, 1e-15);
  return std::min(-0.5 * std::expm1(y), std::nextafter(0.5, 0.0));
}

BranchPair solve_branches(double beta) {
  require_two_branches(beta);
  const auto& cc = critical_constants();
  auto residual = [beta](double x) { return xi(x) - beta; };

  // Small branch: bisect on log x so that exponentially small roots keep full
  // relative precision.  xi -> +inf as x -> 0 and as x -> 1/2.
  auto residual_log = [&](double lx) { return residual(std::exp(lx)); };
  double lo = std::log(cc.m1);
  while (lo > -700.0 && residual(std::exp(lo)) < 0.0) lo = std::max(2.0 * lo - 1.0, -700.0);
  if (residual(std::exp(lo)) < 0.0) throw SolverError("small branch below double range");
  const double log_xs = bisect_with_signs(residual_log, lo, std::log(cc.m1), +1, 1e-15);
  return {std::exp(log_xs), solve_large_branch(beta), beta};
}

double f_compare(double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("f_compare needs 0 <= x < 1");
  const double a = 0.5 * (1.0 + x);
  const double b = 0.5 * (1.0 - x);
  return 0.5 * x * (std::log1p(x) - std::log1p(-x)) - 2.0 * (a * std::log(a) + b * std::log(b));
}

double f_tilde(double x) {
  require_half_open(x, "f_tilde");
  const double bracket =
      2.0 * x * std::log(x) + (1.0 - 2.0 * x) * std::log(1.0 - 2.0 * x) + std::log(3.0);
  return -6.0 * x * x + 4.0 * x - 2.0 / 3.0 + (2.0 / xi(x)) * bracket;
}

}  // namespace cwp
