#pragma once

// Free-energy functional of the two-component Curie-Weiss-Potts model on the
// product of simplices, with its gradient and Hessian in reduced coordinates.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cwp/model.hpp"

namespace cwp {

// -sum_k sum_i (x_i^(k))^2 / 2 - J sum_i x_i^(1) x_i^(2).  Finite couplings only.
double energy_part(const ModelParams& p, const PairMagnetization& x);

// sum_k sum_i x_i^(k) log x_i^(k), with 0 log 0 = 0.
double entropy_part(const PairMagnetization& x);

// energy_part + ((1+J)/beta) entropy_part.  Finite couplings only.
double free_energy(const ModelParams& p, const PairMagnetization& x);

// The J = infinity landscape: -sum_i x_i^(1) x_i^(2) + entropy_part / beta.
double free_energy_no_componentwise(double beta, const PairMagnetization& x);

// Dispatches to free_energy or free_energy_no_componentwise on the coupling.
double landscape_value(const ModelParams& p, const PairMagnetization& x);

// Partial derivatives in reduced coordinates (x_1..x_{q-1}, y_1..y_{q-1}).
// Points within kBoundaryTol of the simplex boundary are rejected.
std::vector<double> gradient(const ModelParams& p, const ReducedPoint& r);

Eigen::MatrixXd hessian(const ModelParams& p, const ReducedPoint& r);

// Eigenvalues of the Hessian at (s, s, 1-2s, t, t, 1-2t) for q = 3, from the two
// quadratic factors of the characteristic polynomial.  Entries 0,1 come from the
// antisymmetric block (governed by Phi'), entries 2,3 from the symmetric block
// (governed by Psi'); each pair is in ascending order.
std::array<double, 4> symmetric_spectrum(const ModelParams& p, double s, double t);

namespace detail {

// Kernels on raw full coordinates (length 2q, both components concatenated).
// No validation; callers guarantee an interior point.
template <typename Vec>
void gradient_kernel(const LandscapeCoefficients& c, std::span<const double> full,
                     std::size_t q, Vec& out) {
  const std::size_t m = q - 1;
  const double* x = full.data();
  const double* y = full.data() + q;
  const double log_xq = std::log(x[m]);
  const double log_yq = std::log(y[m]);
  for (std::size_t k = 0; k < m; ++k) {
    out[k] = -c.intra * (x[k] - x[m]) - c.inter * (y[k] - y[m]) +
             c.temperature * (std::log(x[k]) - log_xq);
    out[m + k] = -c.intra * (y[k] - y[m]) - c.inter * (x[k] - x[m]) +
                 c.temperature * (std::log(y[k]) - log_yq);
  }
}

template <typename Mat>
void hessian_kernel(const LandscapeCoefficients& c, std::span<const double> full,
                    std::size_t q, Mat& out) {
  const std::size_t m = q - 1;
  const double* x = full.data();
  const double* y = full.data() + q;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      const double delta = (k == l) ? 1.0 : 0.0;
      const double ax = c.temperature * (delta / x[k] + 1.0 / x[m]) - c.intra * (delta + 1.0);
      const double ay = c.temperature * (delta / y[k] + 1.0 / y[m]) - c.intra * (delta + 1.0);
      const double b = -c.inter * (delta + 1.0);
      out(k, l) = ax;
      out(m + k, m + l) = ay;
      out(k, m + l) = b;
      out(m + k, l) = b;
    }
  }
}

// Minimum full coordinate; the derivative operations need it above kBoundaryTol.
double min_coordinate(std::span<const double> full);

}  // namespace detail

}  // namespace cwp
