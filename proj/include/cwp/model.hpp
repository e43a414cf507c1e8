#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwp {

// Precondition or invariant violation (bad parameters, point off the domain).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed to converge or to bracket a root.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation does not apply to the requested model family.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline constexpr double kSimplexSumTol = 1e-12;
inline constexpr double kBoundaryTol = 1e-10;

// Pair interaction of the two-component model.  Finite(J) means intra-component
// coupling 1/(1+J) and inter-component coupling J/(1+J); NoComponentwise is the
// J = infinity limit (intra 0, inter 1).
class Coupling {
 public:
  static Coupling finite(double j);
  static Coupling no_componentwise() { return Coupling{}; }

  bool is_finite() const { return j_.has_value(); }
  // Throws UnsupportedError for NoComponentwise.
  double j() const;

  bool operator==(const Coupling&) const = default;

 private:
  Coupling() = default;
  std::optional<double> j_;
};

struct ModelParams {
  int q = 3;
  double beta = 1.0;
  Coupling coupling = Coupling::finite(0.0);

  // Validates beta > 0, q >= 2 and J >= 0.
  ModelParams(int q, double beta, Coupling coupling);
  static ModelParams finite(int q, double beta, double j) {
    return ModelParams(q, beta, Coupling::finite(j));
  }
  static ModelParams no_componentwise(int q, double beta) {
    return ModelParams(q, beta, Coupling::no_componentwise());
  }

  // Throws unless q is 2 or 3.
  void require_analysable() const;

  bool operator==(const ModelParams&) const = default;
};

// Coefficients of F = -a/2 sum x^2 - b sum x.y + t * S, a uniform form that covers
// both the finite-J free energy (a=1, b=J, t=(1+J)/beta) and the J=infinity
// energy (a=0, b=1, t=1/beta).
struct LandscapeCoefficients {
  double intra;
  double inter;
  double temperature;

  static LandscapeCoefficients of(const ModelParams& p);
};

class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> weights);

  std::size_t q() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }

  bool operator==(const SimplexPoint&) const = default;

 private:
  std::vector<double> weights_;
};

struct PairMagnetization {
  SimplexPoint first;
  SimplexPoint second;

  PairMagnetization(SimplexPoint a, SimplexPoint b);
  std::size_t q() const { return first.q(); }
  // Uniform point (1/q, ..., 1/q) in both components.
  static PairMagnetization uniform(int q);

  bool operator==(const PairMagnetization&) const = default;
};

// Free coordinates (x_1..x_{q-1}, y_1..y_{q-1}); the last spin of each component
// is implied.
class ReducedPoint {
 public:
  explicit ReducedPoint(std::vector<double> coords);

  std::size_t size() const { return coords_.size(); }
  std::size_t q() const { return coords_.size() / 2 + 1; }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  bool operator==(const ReducedPoint&) const = default;

 private:
  std::vector<double> coords_;
};

PairMagnetization embed(const ReducedPoint& r);
ReducedPoint reduce(const PairMagnetization& x);

// Full coordinates of both components, concatenated (length 2q), without the
// simplex checks of PairMagnetization.  Used by the hot loops.
std::vector<double> full_coordinates(std::span<const double> reduced);

std::string to_string(const ModelParams& p);

}  // namespace cwp
