#pragma once

// Stationary points of the landscape: multistart Newton search, Morse
// classification, symmetric-family membership and the synchronization verdict.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cwp/model.hpp"

namespace cwp {

inline constexpr double kStationaryTol = 1e-9;
inline constexpr double kDedupRadius = 1e-6;
inline constexpr double kDegenerateTol = 1e-8;
inline constexpr double kMembershipTol = 1e-6;

enum class Classification { LocalMin, Saddle, HigherIndex, LocalMax, Degenerate };
enum class Membership { Uniform, InS2, InL2, Other };
enum class Regime { Synchronized, Desynchronized, Indeterminate };

std::string to_string(Classification c);
std::string to_string(Membership m);
std::string to_string(Regime r);
Classification classification_from_string(const std::string& s);
Membership membership_from_string(const std::string& s);
Regime regime_from_string(const std::string& s);

struct CriticalPoint {
  PairMagnetization location;
  double value = 0.0;
  std::vector<double> spectrum;  // ascending
  int morse_index = 0;
  Classification classification = Classification::Degenerate;
  Membership membership = Membership::Other;

  bool operator==(const CriticalPoint&) const = default;
};

struct LandscapeSummary {
  ModelParams params;
  std::vector<CriticalPoint> points;
  std::vector<std::size_t> minima_order;
  std::vector<std::size_t> lowest_saddles;
  Regime regime = Regime::Indeterminate;

  bool operator==(const LandscapeSummary&) const = default;
};

// Morse classification of an ascending spectrum.
Classification classify_spectrum(const std::vector<double>& spectrum, double tol = kDegenerateTol);

// grid_density n >= 8: starts at the interior nodes i/n of each component.
// Worker threads: CWP_THREADS if set, else hardware concurrency.
LandscapeSummary find_critical_points(const ModelParams& params, int grid_density);

// Symmetric-family membership of an interior point.
Membership membership_of(const ModelParams& params, const PairMagnetization& x);

// Fills minima_order, lowest_saddles and regime from points.
void summarize(LandscapeSummary& summary);

// Classification of (s,s,1-2s,t,t,1-2t) (q = 3) or ((s,1-s),(t,1-t)) (q = 2)
// from the sign criteria of the factored characteristic polynomial.
Classification classify_symmetric(const ModelParams& params, double s, double t);

struct OrderedMinimum {
  std::size_t index;
  double value;
  double gap;  // value minus the lowest minimum
};

struct MinimaOrdering {
  std::vector<OrderedMinimum> minima;
  // q = 3: F(x_s family) - F(uniform) = (intra + inter) * F~(x_s), when both are minima.
  std::optional<double> s2_minus_uniform;
  // q = 2: F(x2, 1-x2) - F(x1, x1) = ((1+J)/beta)(f(s1) - f(s2)), when both are minima.
  std::optional<double> antidiagonal_minus_diagonal;
};

MinimaOrdering minima_ordering(const LandscapeSummary& summary);

}  // namespace cwp
