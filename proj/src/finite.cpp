#include "cwp/finite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "cwp/landscape.hpp"

namespace cwp {
namespace {

std::vector<double> log_factorials(int n) {
  std::vector<double> t(n + 1, 0.0);
  for (int i = 2; i <= n; ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
  return t;
}

double log_multinomial(const std::vector<double>& lf, const std::vector<int>& c, int n) {
  double v = lf[n];
  for (int k : c) v -= lf[k];
  return v;
}

// Exponent of the Gibbs weight: -beta * H_N as a function of the counts.
double gibbs_exponent(double beta, double j, int n, const std::vector<int>& a,
                      const std::vector<int>& b) {
  double same = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same += 0.5 * a[i] * (a[i] - 1.0) + 0.5 * b[i] * (b[i] - 1.0);
    cross += static_cast<double>(a[i]) * b[i];
  }
  return beta / (n * (1.0 + j)) * (same + j * cross);
}

void normalize(std::vector<double>& logw) {
  const double m = *std::max_element(logw.begin(), logw.end());
  double s = 0.0;
  for (double v : logw) s += std::exp(v - m);
  const double lz = m + std::log(s);
  for (double& v : logw) v -= lz;
}

void compositions_into(int n, int q, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == q - 1) {
    cur.push_back(n);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = n; k >= 0; --k) {
    cur.push_back(k);
    compositions_into(n - k, q, cur, out);
    cur.pop_back();
  }
}

int worker_count() {
  if (const char* env = std::getenv("CWP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

SpinConfiguration::SpinConfiguration(int q_, std::vector<int> a, std::vector<int> b)
    : q(q_), first(std::move(a)), second(std::move(b)) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (first.empty() || first.size() != second.size()) {
    throw DomainError("both components need the same positive number of sites");
  }
  for (const auto* comp : {&first, &second}) {
    for (int s : *comp) {
      if (s < 1 || s > q) throw DomainError("spins must lie in 1..q");
    }
  }
}

int LatticePoint::n() const {
  int s = 0;
  for (int c : first) s += c;
  return s;
}

PairMagnetization LatticePoint::fractions() const {
  const double n = static_cast<double>(this->n());
  std::vector<double> a, b;
  for (int c : first) a.push_back(c / n);
  for (int c : second) b.push_back(c / n);
  // Rounding may leave the sum a few ulps from 1; put the slack on the last entry.
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
  }
  a.back() = std::max(0.0, 1.0 - sa);
  b.back() = std::max(0.0, 1.0 - sb);
  return PairMagnetization(SimplexPoint(a), SimplexPoint(b));
}

double hamiltonian(const SpinConfiguration& c, double j) {
  if (!(j >= 0.0) || !std::isfinite(j)) throw DomainError("J must be finite and nonnegative");
  const int n = c.n();
  long long same = 0;
  for (const auto* comp : {&c.first, &c.second}) {
    for (int i = 0; i < n; ++i) {
      for (int k = i + 1; k < n; ++k) same += ((*comp)[i] == (*comp)[k]);
    }
  }
  long long cross = 0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) cross += (c.first[i] == c.second[k]);
  }
  return -(static_cast<double>(same) / (1.0 + j) + j * static_cast<double>(cross) / (1.0 + j)) / n;
}

LatticePoint magnetization(const SpinConfiguration& c) {
  LatticePoint p{std::vector<int>(c.q, 0), std::vector<int>(c.q, 0)};
  for (int s : c.first) ++p.first[s - 1];
  for (int s : c.second) ++p.second[s - 1];
  return p;
}

std::vector<std::vector<int>> compositions(int n, int q) {
  if (n < 0 || q < 1) throw DomainError("compositions need n >= 0 and q >= 1");
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  if (q == 1) return {{n}};
  compositions_into(n, q, cur, out);
  return out;
}

DistributionTable::DistributionTable(int n, ModelParams params, std::vector<std::vector<int>> parts,
                                     std::vector<double> log_prob)
    : n_(n), params_(params), parts_(std::move(parts)), log_prob_(std::move(log_prob)) {
  if (log_prob_.size() != parts_.size() * parts_.size()) {
    throw DomainError("table size does not match the composition list");
  }
}

std::optional<std::size_t> DistributionTable::index_of(const std::vector<int>& counts) const {
  // parts_ is in descending lexicographic order.
  auto it = std::lower_bound(parts_.begin(), parts_.end(), counts, std::greater<>());
  if (it == parts_.end() || *it != counts) return std::nullopt;
  return static_cast<std::size_t>(it - parts_.begin());
}

std::optional<double> DistributionTable::log_prob(const LatticePoint& x) const {
  auto a = index_of(x.first);
  auto b = index_of(x.second);
  if (!a || !b) return std::nullopt;
  return log_prob(*a, *b);
}

LatticePoint DistributionTable::point(std::size_t a, std::size_t b) const {
  return LatticePoint{parts_[a], parts_[b]};
}

double DistributionTable::total_probability() const {
  double s = 0.0;
  for (double v : log_prob_) s += std::exp(v);
  return s;
}

LatticePoint DistributionTable::argmax() const {
  const auto it = std::max_element(log_prob_.begin(), log_prob_.end());
  const std::size_t idx = static_cast<std::size_t>(it - log_prob_.begin());
  return point(idx / parts_.size(), idx % parts_.size());
}

void DistributionTable::write_csv(std::ostream& os) const {
  const int q = params_.q;
  for (int i = 1; i <= q; ++i) os << 'n' << i << ',';
  for (int i = 1; i <= q; ++i) os << 'm' << i << ',';
  os << "log_prob\n";
  char buf[32];
  for (std::size_t a = 0; a < parts_.size(); ++a) {
    for (std::size_t b = 0; b < parts_.size(); ++b) {
      for (int c : parts_[a]) os << c << ',';
      for (int c : parts_[b]) os << c << ',';
      std::snprintf(buf, sizeof buf, "%.17g", log_prob(a, b));
      os << buf << '\n';
    }
  }
}

std::uint64_t table_bytes(int n, int q) {
  // Number of compositions is C(n+q-1, q-1).
  double k = 1.0;
  for (int i = 1; i < q; ++i) k = k * (n + i) / i;
  const double kk = std::round(k);
  return static_cast<std::uint64_t>(kk * kk * sizeof(double));
}

DistributionTable exact_nu(int n, const ModelParams& params, int cap) {
  if (!params.coupling.is_finite()) throw UnsupportedError("exact_nu needs a finite coupling");
  if (n < 1) throw DomainError("N must be at least 1");
  if (n > cap) {
    std::ostringstream os;
    os << "N=" << n << " exceeds the cap " << cap << "; the table would need about "
       << table_bytes(n, params.q) / (1024.0 * 1024.0) << " MiB";
    throw DomainError(os.str());
  }
  const double j = params.coupling.j();
  auto parts = compositions(n, params.q);
  const std::size_t k = parts.size();
  const auto lf = log_factorials(n);
  std::vector<double> lm(k);
  for (std::size_t a = 0; a < k; ++a) lm[a] = log_multinomial(lf, parts[a], n);

  std::vector<double> logw(k * k);
  const int workers = std::max(1, std::min<int>(worker_count(), static_cast<int>(k)));
  auto fill = [&](int w) {
    for (std::size_t a = k * w / workers; a < k * (w + 1) / workers; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        logw[a * k + b] = lm[a] + lm[b] + gibbs_exponent(params.beta, j, n, parts[a], parts[b]);
      }
    }
  };
  if (workers == 1) {
    fill(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(fill, w);
    for (auto& t : pool) t.join();
  }
  normalize(logw);
  return DistributionTable(n, params, std::move(parts), std::move(logw));
}

MeasurabilityResult hamiltonian_is_magnetization_measurable(int n, int q, double j, int trials,
                                                            std::uint64_t seed) {
  if (n < 1 || n > 8) throw DomainError("measurability check is meant for 1 <= N <= 8");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> spin(1, q);
  MeasurabilityResult out;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> a(n), b(n);
    for (int& s : a) s = spin(rng);
    for (int& s : b) s = spin(rng);
    std::vector<int> pa = a, pb = b;
    std::shuffle(pa.begin(), pa.end(), rng);
    std::shuffle(pb.begin(), pb.end(), rng);
    SpinConfiguration x(q, a, b), y(q, pa, pb);
    if (hamiltonian(x, j) != hamiltonian(y, j)) {
      out.holds = false;
      out.witness.emplace(x, y);
      return out;
    }
  }
  return out;
}

double g_term(const ModelParams& params, const PairMagnetization& x) {
  if (!params.coupling.is_finite()) throw UnsupportedError("g_term needs a finite coupling");
  const double j = params.coupling.j();
  double s = 0.0;
  for (const auto* comp : {&x.first, &x.second}) {
    for (double v : comp->weights()) {
      if (!(v > 0.0)) throw DomainError("g_term needs an interior point");
      s += std::log(v);
    }
  }
  return (1.0 + j) / (2.0 * params.beta) * s;
}

StirlingGap stirling_gap(const ModelParams& params, const std::vector<int>& sizes, double floor) {
  if (!params.coupling.is_finite()) throw UnsupportedError("stirling_gap needs a finite coupling");
  if (sizes.size() < 2) throw DomainError("stirling_gap needs at least two sizes");
  const double j = params.coupling.j();
  const double scale = params.beta / (1.0 + j);
  StirlingGap out;
  out.sizes = sizes;
  for (int n : sizes) {
    const DistributionTable t = exact_nu(n, params, std::max(n, kDefaultNCap));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t a = 0; a < t.parts(); ++a) {
      for (std::size_t b = 0; b < t.parts(); ++b) {
        const LatticePoint p = t.point(a, b);
        const bool interior = std::all_of(p.first.begin(), p.first.end(),
                                          [&](int c) { return c >= floor * n && c >= 1; }) &&
                              std::all_of(p.second.begin(), p.second.end(),
                                          [&](int c) { return c >= floor * n && c >= 1; });
        if (!interior) continue;
        const PairMagnetization x = p.fractions();
        const double approx = -n * scale * (free_energy(params, x) + g_term(params, x) / n);
        const double r = t.log_prob(a, b) - approx;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    out.gaps.push_back(0.5 * (hi - lo));
  }
  out.max_abs_gap = out.gaps.back();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    mx += std::log(static_cast<double>(sizes[i]));
    my += std::log(out.gaps[i]);
  }
  mx /= sizes.size();
  my /= sizes.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double dx = std::log(static_cast<double>(sizes[i])) - mx;
    sxy += dx * (std::log(out.gaps[i]) - my);
    sxx += dx * dx;
  }
  out.fitted_decay = sxy / sxx;
  return out;
}

}  // namespace cwp
