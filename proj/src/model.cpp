#include "cwp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cwp {

Coupling Coupling::finite(double j) {
  if (!std::isfinite(j) || j < 0.0) {
    throw DomainError("coupling J must be a finite nonnegative real");
  }
  Coupling c;
  c.j_ = j;
  return c;
}

double Coupling::j() const {
  if (!j_) throw UnsupportedError("coupling is NoComponentwise (J = infinity)");
  return *j_;
}

ModelParams::ModelParams(int q_, double beta_, Coupling coupling_)
    : q(q_), beta(beta_), coupling(coupling_) {
  if (q < 2) throw DomainError("spin count q must be at least 2");
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("inverse temperature beta must be positive and finite");
  }
}

void ModelParams::require_analysable() const {
  if (q != 2 && q != 3) {
    throw DomainError("analysis is implemented for q = 2 and q = 3 only");
  }
}

LandscapeCoefficients LandscapeCoefficients::of(const ModelParams& p) {
  if (p.coupling.is_finite()) {
    const double j = p.coupling.j();
    return {1.0, j, (1.0 + j) / p.beta};
  }
  return {0.0, 1.0, 1.0 / p.beta};
}

SimplexPoint::SimplexPoint(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.size() < 2) throw DomainError("simplex point needs at least two weights");
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("simplex weight outside [0, 1]");
  }
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(sum - 1.0) > kSimplexSumTol) {
    throw DomainError("simplex weights do not sum to 1");
  }
}

PairMagnetization::PairMagnetization(SimplexPoint a, SimplexPoint b)
    : first(std::move(a)), second(std::move(b)) {
  if (first.q() != second.q()) throw DomainError("components have different q");
}

PairMagnetization PairMagnetization::uniform(int q) {
  std::vector<double> w(static_cast<std::size_t>(q), 1.0 / q);
  // Absorb rounding into the last weight so the sum is exactly representable.
  w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
  return {SimplexPoint(w), SimplexPoint(w)};
}

ReducedPoint::ReducedPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty() || coords_.size() % 2 != 0) {
    throw DomainError("reduced point needs 2(q-1) coordinates");
  }
  const std::size_t half = coords_.size() / 2;
  for (std::size_t k = 0; k < 2; ++k) {
    double partial = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      const double c = coords_[k * half + i];
      if (!(c >= 0.0 && c <= 1.0)) throw DomainError("reduced coordinate outside [0, 1]");
      partial += c;
    }
    if (partial > 1.0 + kSimplexSumTol) {
      throw DomainError("reduced coordinates of a component sum above 1");
    }
  }
}

std::vector<double> full_coordinates(std::span<const double> reduced) {
  const std::size_t half = reduced.size() / 2;
  const std::size_t q = half + 1;
  std::vector<double> full(2 * q);
  for (std::size_t k = 0; k < 2; ++k) {
    double rest = 1.0;
    for (std::size_t i = 0; i < half; ++i) {
      full[k * q + i] = reduced[k * half + i];
      rest -= reduced[k * half + i];
    }
    full[k * q + half] = rest;
  }
  return full;
}

PairMagnetization embed(const ReducedPoint& r) {
  std::vector<double> full = full_coordinates(r.coords());
  const std::size_t q = r.q();
  for (double& v : full) {
    if (v < -kSimplexSumTol) throw DomainError("implied last coordinate is negative");
    // Partial sums within tolerance of 1 leave a tiny negative remainder.
    v = std::max(v, 0.0);
  }
  std::vector<double> a(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(q));
  std::vector<double> b(full.begin() + static_cast<std::ptrdiff_t>(q), full.end());
  return {SimplexPoint(std::move(a)), SimplexPoint(std::move(b))};
}

ReducedPoint reduce(const PairMagnetization& x) {
  const std::size_t q = x.q();
  std::vector<double> coords;
  coords.reserve(2 * (q - 1));
  for (std::size_t i = 0; i + 1 < q; ++i) coords.push_back(x.first[i]);
  for (std::size_t i = 0; i + 1 < q; ++i) coords.push_back(x.second[i]);
  return ReducedPoint(std::move(coords));
}

std::string to_string(const ModelParams& p) {
  std::ostringstream os;
  os << "q=" << p.q << " beta=" << p.beta << " J=";
  if (p.coupling.is_finite()) {
    os << p.coupling.j();
  } else {
    os << "inf";
  }
  return os.str();
}

}  // namespace cwp
