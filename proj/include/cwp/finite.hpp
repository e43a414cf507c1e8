#pragma once

// Exact finite-N model: Hamiltonian on spin configurations and the exact law of
// the empirical magnetization pair, used as ground truth for the landscape.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "cwp/model.hpp"

namespace cwp {

struct SpinConfiguration {
  int q = 3;
  std::vector<int> first;   // spins in 1..q
  std::vector<int> second;

  SpinConfiguration(int q, std::vector<int> first, std::vector<int> second);
  int n() const { return static_cast<int>(first.size()); }

  bool operator==(const SpinConfiguration&) const = default;
};

struct LatticePoint {
  std::vector<int> first;   // spin counts, summing to N
  std::vector<int> second;

  int n() const;
  PairMagnetization fractions() const;

  bool operator==(const LatticePoint&) const = default;
  auto operator<=>(const LatticePoint&) const = default;
};

// Direct double sum over site pairs.  Finite J only.
double hamiltonian(const SpinConfiguration& config, double j);

LatticePoint magnetization(const SpinConfiguration& config);

// All compositions of n into q nonnegative parts, in lexicographic order.
std::vector<std::vector<int>> compositions(int n, int q);

class DistributionTable {
 public:
  DistributionTable(int n, ModelParams params, std::vector<std::vector<int>> parts,
                    std::vector<double> log_prob);

  int n() const { return n_; }
  const ModelParams& params() const { return params_; }
  std::size_t parts() const { return parts_.size(); }
  std::size_t size() const { return log_prob_.size(); }

  double log_prob(std::size_t a, std::size_t b) const { return log_prob_[a * parts_.size() + b]; }
  std::optional<double> log_prob(const LatticePoint& x) const;
  LatticePoint point(std::size_t a, std::size_t b) const;
  const std::vector<int>& part(std::size_t a) const { return parts_[a]; }

  double total_probability() const;
  LatticePoint argmax() const;

  // Columns n1..nq, m1..mq, log_prob.
  void write_csv(std::ostream& os) const;

 private:
  std::optional<std::size_t> index_of(const std::vector<int>& counts) const;

  int n_;
  ModelParams params_;
  std::vector<std::vector<int>> parts_;
  std::vector<double> log_prob_;
};

inline constexpr int kDefaultNCap = 60;

// Bytes needed for the table at (n, q).
std::uint64_t table_bytes(int n, int q);

// Refuses N above cap (DomainError carrying the memory estimate) and infinite J.
DistributionTable exact_nu(int n, const ModelParams& params, int cap = kDefaultNCap);

struct MeasurabilityResult {
  bool holds = true;
  std::optional<std::pair<SpinConfiguration, SpinConfiguration>> witness;
};

// Compares H_N on random configurations and site-shuffled copies of them.
MeasurabilityResult hamiltonian_is_magnetization_measurable(int n, int q, double j, int trials,
                                                            std::uint64_t seed = 1);

// ((1+J)/(2 beta)) log prod over all 2q coordinates of x.
double g_term(const ModelParams& params, const PairMagnetization& x);

struct StirlingGap {
  std::vector<int> sizes;
  std::vector<double> gaps;  // half the spread of the residual, per size
  double max_abs_gap = 0.0;  // at the largest size
  double fitted_decay = 0.0; // least-squares slope of log gap against log N
};

// Interior points only: every fraction at least `floor`.
StirlingGap stirling_gap(const ModelParams& params, const std::vector<int>& sizes = {10, 20, 40},
                         double floor = 0.1);

}  // namespace cwp
