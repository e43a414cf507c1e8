#include "cwp/phase.hpp"

#include <algorithm>
#include <cmath>

#include "cwp/roots.hpp"
#include "cwp/scalar.hpp"

namespace cwp {
namespace {

void require_beta_two(double beta) {
  if (!(beta >= 2.0) || !std::isfinite(beta)) throw DomainError("needs beta >= 2");
}

void require_beta_nonnegative(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("needs beta >= 0");
}

double ratio(double beta, double k) { return (beta - k) / (beta + k); }

}  // namespace

double zeta1(double beta) {
  require_beta_two(beta);
  return (beta - 2.0) / (beta + 2.0);
}

double zeta2(double beta) {
  require_beta_two(beta);
  const double root = std::sqrt(beta * (beta - 2.0));
  const double l = 2.0 * std::log((std::sqrt(beta) + std::sqrt(beta - 2.0)) / std::sqrt(2.0));
  if (root + l == 0.0) return 0.0;
  return (root - l) / (root + l);
}

double gamma(double beta) {
  require_beta_two(beta);
  return std::sqrt((beta - 2.0) / beta);
}

Q2Equivalences q2_equivalences(double beta, double j) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  Q2Equivalences e{theta_prime(0.0, beta, j), false};
  if (beta > 2.0) {
    const double g = gamma(beta);
    e.five_to_nine = theta(g, beta, j) < -g;
  }
  return e;
}

double psi1(double beta) {
  require_beta_nonnegative(beta);
  const auto& cc = critical_constants();
  if (beta <= cc.beta3) return 0.0;
  return ratio(beta, 1.0 / solve_large_branch(beta));
}

double psi2(double beta) {
  require_beta_nonnegative(beta);
  const auto& cc = critical_constants();
  if (beta <= cc.beta1 + 1e-9 || beta >= cc.beta3) return 0.0;
  const double xl = solve_large_branch(beta);
  return ratio(beta, 1.0 / (3.0 * xl * (1.0 - 2.0 * xl)));
}

double psi3(double beta) {
  require_beta_nonnegative(beta);
  const double rad = 25.0 * beta * beta - 50.0 * beta + 1.0;
  if (rad < 0.0) return 0.0;
  return std::max(0.0, (beta - 3.0 + std::sqrt(rad)) / (2.0 * (1.0 + 6.0 * beta)));
}

double psi_sync(double beta) {
  require_beta_nonnegative(beta);
  if (beta <= critical_constants().beta1) return 0.0;
  return std::max(psi1(beta), std::min(critical_constants().jc, psi3(beta)));
}

double psi_desync(double beta) { return psi1(beta) + psi2(beta); }

const Crossings& crossings() {
  static const Crossings c = [] {
    const auto& cc = critical_constants();
    Crossings out{};
    out.b = bisect([&](double b) { return psi1(b) - std::min(cc.jc, psi3(b)); }, cc.beta3, 6.0,
                   1e-12, "crossing B");
    out.a = bisect([&](double b) { return psi3(b) - cc.jc; }, cc.beta1, out.b, 1e-12, "crossing A");
    return out;
  }();
  return c;
}

std::string to_string(AnalyticRegime r) {
  switch (r) {
    case AnalyticRegime::Synchronized: return "synchronized";
    case AnalyticRegime::Desynchronized: return "desynchronized";
    case AnalyticRegime::Unresolved: return "unresolved";
  }
  return "unresolved";
}

AnalyticRegime analytic_regime(int q, double beta, double j) {
  if (!(beta > 0.0) || !(j >= 0.0)) throw DomainError("needs beta > 0 and J >= 0");
  if (q == 2) {
    if (std::abs(beta - 2.0) < kBoundaryBand) return AnalyticRegime::Unresolved;
    if (beta < 2.0) return AnalyticRegime::Synchronized;
    const double z = zeta1(beta);
    if (std::abs(j - z) < kBoundaryBand) return AnalyticRegime::Unresolved;
    return j > z ? AnalyticRegime::Synchronized : AnalyticRegime::Desynchronized;
  }
  if (q != 3) throw DomainError("phase boundaries are known for q = 2 and q = 3 only");
  const auto& cc = critical_constants();
  if (std::abs(beta - cc.beta1) < kBoundaryBand || std::abs(beta - cc.beta3) < kBoundaryBand) {
    return AnalyticRegime::Unresolved;
  }
  // single uniform minimum for every J >= 0
  if (beta < cc.beta1) return AnalyticRegime::Synchronized;
  const double s = psi_sync(beta);
  const double d = psi_desync(beta);
  if (std::abs(j - s) < kBoundaryBand || std::abs(j - d) < kBoundaryBand) {
    return AnalyticRegime::Unresolved;
  }
  if (j > s) return AnalyticRegime::Synchronized;
  if (j < d) return AnalyticRegime::Desynchronized;
  return AnalyticRegime::Unresolved;
}

double Range::at(int i) const {
  if (count == 1) return start;
  return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
}

PhaseSample phase_sample(int q, double beta, double j, bool with_numeric, int grid_density) {
  PhaseSample s;
  s.q = q;
  s.beta = beta;
  s.j = j;
  try {
    if (q == 2) {
      const bool ok = beta >= 2.0;
      s.boundaries = {{"zeta1", ok ? std::optional(zeta1(beta)) : std::nullopt},
                      {"zeta2", ok ? std::optional(zeta2(beta)) : std::nullopt},
                      {"gamma", ok ? std::optional(gamma(beta)) : std::nullopt}};
    } else {
      s.boundaries = {{"psi1", psi1(beta)},
                      {"psi2", psi2(beta)},
                      {"psi3", psi3(beta)},
                      {"psi_s", psi_sync(beta)},
                      {"psi_d", psi_desync(beta)}};
    }
    s.analytic_regime = analytic_regime(q, beta, j);
    if (with_numeric) {
      s.numeric_regime = find_critical_points(ModelParams::finite(q, beta, j), grid_density).regime;
    }
  } catch (const std::exception& e) {
    s.error = e.what();
  }
  return s;
}

std::vector<PhaseSample> sweep(int q, const Range& beta, const Range& j, bool with_numeric,
                               int grid_density) {
  if (q != 2 && q != 3) throw DomainError("sweep needs q = 2 or q = 3");
  if (beta.count < 2 || j.count < 2) throw DomainError("sweep counts must be at least 2");
  if (!(beta.start > 0.0 && beta.stop > 0.0) || !(j.start >= 0.0 && j.stop >= 0.0)) {
    throw DomainError("sweep ranges must be positive");
  }
  std::vector<PhaseSample> out;
  out.reserve(static_cast<std::size_t>(beta.count) * j.count);
  for (int a = 0; a < beta.count; ++a) {
    for (int b = 0; b < j.count; ++b) {
      out.push_back(phase_sample(q, beta.at(a), j.at(b), with_numeric, grid_density));
    }
  }
  return out;
}

}  // namespace cwp
