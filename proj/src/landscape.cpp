#include "cwp/landscape.hpp"

#include <algorithm>
#include <cmath>

namespace cwp {
namespace {

double x_log_x(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

void require_same_q(const ModelParams& p, std::size_t q) {
  if (static_cast<std::size_t>(p.q) != q) {
    throw DomainError("point dimension does not match the model's q");
  }
}

std::vector<double> interior_full(const ModelParams& p, const ReducedPoint& r) {
  require_same_q(p, r.q());
  std::vector<double> full = full_coordinates(r.coords());
  if (detail::min_coordinate(full) <= kBoundaryTol) {
    throw DomainError("derivatives are undefined on the simplex boundary");
  }
  return full;
}

}  // namespace

double detail::min_coordinate(std::span<const double> full) {
  return *std::min_element(full.begin(), full.end());
}

double energy_part(const ModelParams& p, const PairMagnetization& x) {
  require_same_q(p, x.q());
  const double j = p.coupling.j();
  double squares = 0.0;
  double overlap = 0.0;
  for (std::size_t i = 0; i < x.q(); ++i) {
    squares += x.first[i] * x.first[i] + x.second[i] * x.second[i];
    overlap += x.first[i] * x.second[i];
  }
  return -0.5 * squares - j * overlap;
}

double entropy_part(const PairMagnetization& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.q(); ++i) s += x_log_x(x.first[i]) + x_log_x(x.second[i]);
  return s;
}

double free_energy(const ModelParams& p, const PairMagnetization& x) {
  const double j = p.coupling.j();
  return energy_part(p, x) + ((1.0 + j) / p.beta) * entropy_part(x);
}

double free_energy_no_componentwise(double beta, const PairMagnetization& x) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  double overlap = 0.0;
  for (std::size_t i = 0; i < x.q(); ++i) overlap += x.first[i] * x.second[i];
  return -overlap + entropy_part(x) / beta;
}

double landscape_value(const ModelParams& p, const PairMagnetization& x) {
  if (p.coupling.is_finite()) return free_energy(p, x);
  require_same_q(p, x.q());
  return free_energy_no_componentwise(p.beta, x);
}

std::vector<double> gradient(const ModelParams& p, const ReducedPoint& r) {
  const std::vector<double> full = interior_full(p, r);
  std::vector<double> g(r.size());
  detail::gradient_kernel(LandscapeCoefficients::of(p), full, r.q(), g);
  return g;
}

Eigen::MatrixXd hessian(const ModelParams& p, const ReducedPoint& r) {
  const std::vector<double> full = interior_full(p, r);
  const auto n = static_cast<Eigen::Index>(r.size());
  Eigen::MatrixXd h(n, n);
  detail::hessian_kernel(LandscapeCoefficients::of(p), full, r.q(), h);
  return h;
}

std::array<double, 4> symmetric_spectrum(const ModelParams& p, double s, double t) {
  if (p.q != 3) throw DomainError("symmetric_spectrum is defined for q = 3");
  if (!(s > 0.0 && s < 0.5) || !(t > 0.0 && t < 0.5)) {
    throw DomainError("symmetric_spectrum needs s, t in (0, 1/2)");
  }
  const auto c = LandscapeCoefficients::of(p);
  const double s1 = c.temperature / s;
  const double s2 = c.temperature / (1.0 - 2.0 * s);
  const double t1 = c.temperature / t;
  const double t2 = c.temperature / (1.0 - 2.0 * t);

  // Each factor is the characteristic polynomial of [[a, -b], [-b, d]].
  auto roots = [](double a, double d, double b) {
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), b);
    return std::array<double, 2>{mean - radius, mean + radius};
  };
  const auto anti = roots(s1 - c.intra, t1 - c.intra, c.inter);
  const auto sym = roots(s1 + 2.0 * s2 - 3.0 * c.intra, t1 + 2.0 * t2 - 3.0 * c.intra,
                         3.0 * c.inter);
  return {anti[0], anti[1], sym[0], sym[1]};
}

}  // namespace cwp
