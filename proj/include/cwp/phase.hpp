#pragma once

// Synchronization boundaries in the (beta, J) plane: zeta_1, zeta_2 for q = 2 and
// psi_1, psi_2, psi_3, psi_s, psi_d for q = 3, plus grid sweeps.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cwp/critical.hpp"

namespace cwp {

// beta >= 2.
double zeta1(double beta);
double zeta2(double beta);
double gamma(double beta);

struct Q2Equivalences {
  double theta0_slope;
  bool five_to_nine;  // Theta(gamma) < -gamma; false when beta <= 2
};

Q2Equivalences q2_equivalences(double beta, double j);

// beta >= 0; indicators make psi_1, psi_2 vanish off their supports.
double psi1(double beta);
double psi2(double beta);
// Clamped at 0 where the closed form is negative or its radicand is.
double psi3(double beta);
double psi_sync(double beta);
double psi_desync(double beta);

struct Crossings {
  double a;  // psi_3 = J_c
  double b;  // psi_1 = min(J_c, psi_3)
};

// Computed once on first use.
const Crossings& crossings();

enum class AnalyticRegime { Synchronized, Desynchronized, Unresolved };

std::string to_string(AnalyticRegime r);

// Distance below which (beta, J) counts as sitting on a boundary.
inline constexpr double kBoundaryBand = 1e-6;

AnalyticRegime analytic_regime(int q, double beta, double j);

struct PhaseSample {
  int q = 3;
  double beta = 0.0;
  double j = 0.0;
  // Column order: psi1, psi2, psi3, psi_s, psi_d (q = 3) or zeta1, zeta2, gamma (q = 2).
  std::vector<std::pair<std::string, std::optional<double>>> boundaries;
  AnalyticRegime analytic_regime = AnalyticRegime::Unresolved;
  std::optional<Regime> numeric_regime;
  std::optional<std::string> error;
};

struct Range {
  double start;
  double stop;
  int count;

  double at(int i) const;
};

PhaseSample phase_sample(int q, double beta, double j, bool with_numeric, int grid_density = 8);

// Row-major over beta then J.  Node failures are recorded in PhaseSample::error.
std::vector<PhaseSample> sweep(int q, const Range& beta, const Range& j, bool with_numeric,
                               int grid_density = 8);

}  // namespace cwp
