#include "cwp/critical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

#include <Eigen/Dense>

#include "cwp/landscape.hpp"
#include "cwp/scalar.hpp"

namespace cwp {
namespace {

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using Full = std::array<double, 6>;

constexpr int kMaxIterations = 200;
constexpr int kMaxHalvings = 50;
constexpr double kPolishTarget = 1e-13;

struct Problem {
  LandscapeCoefficients coef;
  std::size_t q;
};

// Returns false when some implied coordinate is not strictly positive.
bool to_full(const Vec& r, std::size_t q, Full& full) {
  const std::size_t m = q - 1;
  for (std::size_t k = 0; k < 2; ++k) {
    double rest = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = r[k * m + i];
      if (!(v > 0.0)) return false;
      full[k * q + i] = v;
      rest -= v;
    }
    if (!(rest > 0.0)) return false;
    full[k * q + m] = rest;
  }
  return true;
}

bool grad_at(const Problem& pb, const Vec& r, Vec& g) {
  Full full{};
  if (!to_full(r, pb.q, full)) return false;
  g.resize(r.size());
  detail::gradient_kernel(pb.coef, std::span<const double>(full.data(), 2 * pb.q), pb.q, g);
  return g.allFinite();
}

void hess_at(const Problem& pb, const Vec& r, Mat& h) {
  Full full{};
  to_full(r, pb.q, full);
  h.resize(r.size(), r.size());
  detail::hessian_kernel(pb.coef, std::span<const double>(full.data(), 2 * pb.q), pb.q, h);
}

// Damped Newton on grad F = 0 with the gradient norm as merit function, so that
// saddles and maxima are reachable.  Returns the point if it ends stationary.
std::optional<Vec> newton(const Problem& pb, Vec x) {
  Vec g;
  if (!grad_at(pb, x, g)) return std::nullopt;
  double gn = g.norm();
  Mat h;
  Vec trial, gt;
  for (int it = 0; it < kMaxIterations && gn > kPolishTarget; ++it) {
    hess_at(pb, x, h);
    Vec dx = h.colPivHouseholderQr().solve(-g);
    if (!dx.allFinite()) dx = -g;
    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k <= kMaxHalvings; ++k, alpha *= 0.5) {
      trial = x + alpha * dx;
      if (grad_at(pb, trial, gt) && gt.norm() < gn) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    x = trial;
    g = gt;
    gn = g.norm();
  }
  if (gn < kStationaryTol) return x;
  return std::nullopt;
}

double value_at(const Problem& pb, const Vec& r, bool& ok) {
  Full full{};
  ok = to_full(r, pb.q, full);
  if (!ok) return 0.0;
  const double* x = full.data();
  const double* y = full.data() + pb.q;
  double energy = 0.0, entropy = 0.0;
  for (std::size_t i = 0; i < pb.q; ++i) {
    energy += -0.5 * pb.coef.intra * (x[i] * x[i] + y[i] * y[i]) - pb.coef.inter * x[i] * y[i];
    entropy += x[i] * std::log(x[i]) + y[i] * std::log(y[i]);
  }
  return energy + pb.coef.temperature * entropy;
}

// Descent on F with the Hessian eigenvalues replaced by their absolute values,
// backtracking until F drops.  Finds minima whose Newton basins miss the grid.
Vec descend(const Problem& pb, Vec x) {
  bool ok = false;
  double f = value_at(pb, x, ok);
  if (!ok) return x;
  Vec g, trial;
  Mat h;
  for (int it = 0; it < kMaxIterations; ++it) {
    if (!grad_at(pb, x, g) || g.norm() < kStationaryTol) break;
    hess_at(pb, x, h);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec lam = es.eigenvalues().cwiseAbs().cwiseMax(1e-8);
    Vec dx = -(es.eigenvectors() * (es.eigenvectors().transpose() * g).cwiseQuotient(lam));
    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k <= kMaxHalvings; ++k, alpha *= 0.5) {
      trial = x + alpha * dx;
      const double ft = value_at(pb, trial, ok);
      if (ok && ft < f) {
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    x = trial;
  }
  return x;
}

int thread_count() {
  if (const char* env = std::getenv("CWP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<Vec> start_grid(std::size_t q, int n) {
  std::vector<std::vector<double>> comp;
  if (q == 2) {
    for (int i = 1; i < n; ++i) comp.push_back({static_cast<double>(i) / n});
  } else {
    for (int i = 1; i < n; ++i) {
      for (int j = 1; i + j < n; ++j) {
        comp.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      }
    }
  }
  std::vector<Vec> starts;
  starts.reserve(comp.size() * comp.size());
  const std::size_t m = q - 1;
  for (const auto& a : comp) {
    for (const auto& b : comp) {
      Vec v(2 * m);
      for (std::size_t i = 0; i < m; ++i) {
        v[i] = a[i];
        v[m + i] = b[i];
      }
      starts.push_back(v);
    }
  }
  return starts;
}

bool is_duplicate(const std::vector<Vec>& found, const Vec& x) {
  return std::any_of(found.begin(), found.end(),
                     [&](const Vec& f) { return (f - x).norm() < kDedupRadius; });
}

// Images of x under simultaneous spin relabeling and component swap.
std::vector<Vec> orbit(const Vec& x, std::size_t q) {
  Full full{};
  to_full(x, q, full);
  std::vector<std::size_t> perm(q);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Vec> out;
  const std::size_t m = q - 1;
  do {
    for (int swap = 0; swap < 2; ++swap) {
      Vec v(2 * m);
      for (std::size_t k = 0; k < 2; ++k) {
        const std::size_t src = swap ? 1 - k : k;
        for (std::size_t i = 0; i < m; ++i) v[k * m + i] = full[src * q + perm[i]];
      }
      out.push_back(v);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool sync_compatible(Membership m) { return m != Membership::Other; }

struct Branches {
  std::optional<BranchPair> pair;
};

Branches branches_for(const ModelParams& params) {
  Branches b;
  if (params.q == 3 && params.beta > critical_constants().beta1 + 1e-9) {
    b.pair = solve_branches(params.beta);
  }
  return b;
}

bool matches_family(const std::array<double, 3>& sorted, double x) {
  std::array<double, 3> target{x, x, 1.0 - 2.0 * x};
  std::sort(target.begin(), target.end());
  for (int i = 0; i < 3; ++i) {
    if (std::abs(sorted[i] - target[i]) > kMembershipTol) return false;
  }
  return true;
}

Membership membership_with(const ModelParams& params, const Branches& br,
                           const PairMagnetization& x) {
  const std::size_t q = x.q();
  bool same = true;
  for (std::size_t i = 0; i < q; ++i) {
    if (std::abs(x.first[i] - x.second[i]) > kMembershipTol) same = false;
  }
  if (q == 2) {
    const bool center = std::abs(x.first[0] - 0.5) <= kMembershipTol &&
                        std::abs(x.second[0] - 0.5) <= kMembershipTol;
    if (center) return Membership::Uniform;
    return same ? Membership::InS2 : Membership::Other;
  }
  if (!same || q != 3 || params.q != 3) return Membership::Other;
  std::array<double, 3> sorted{x.first[0], x.first[1], x.first[2]};
  std::sort(sorted.begin(), sorted.end());
  if (matches_family(sorted, 1.0 / 3.0)) return Membership::Uniform;
  if (br.pair) {
    if (matches_family(sorted, br.pair->x_s)) return Membership::InS2;
    if (matches_family(sorted, br.pair->x_l)) return Membership::InL2;
  }
  return Membership::Other;
}

bool less_point(const CriticalPoint& a, const CriticalPoint& b) {
  if (a.value != b.value) return a.value < b.value;
  const auto ra = reduce(a.location);
  const auto rb = reduce(b.location);
  return std::lexicographical_compare(ra.coords().begin(), ra.coords().end(),
                                      rb.coords().begin(), rb.coords().end());
}

// Number of negative eigenvalues of [[p, -1], [-1, r]] scaled by a positive
// factor, from its trace and determinant.
Classification classify_blocks(const std::vector<std::array<double, 2>>& crit, int dim) {
  int negative = 0;
  for (const auto& c : crit) {
    const double trace = c[0];
    const double det = c[1];
    if (std::abs(det) <= kDegenerateTol) return Classification::Degenerate;
    if (det < 0.0) {
      negative += 1;
    } else if (trace < 0.0) {
      negative += 2;
    }
  }
  if (negative == 0) return Classification::LocalMin;
  if (negative == 1) return Classification::Saddle;
  if (negative == dim) return Classification::LocalMax;
  return Classification::HigherIndex;
}

}  // namespace

std::string to_string(Classification c) {
  switch (c) {
    case Classification::LocalMin: return "local_min";
    case Classification::Saddle: return "saddle";
    case Classification::HigherIndex: return "higher_index";
    case Classification::LocalMax: return "local_max";
    case Classification::Degenerate: return "degenerate";
  }
  return "degenerate";
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Uniform: return "uniform";
    case Membership::InS2: return "S2";
    case Membership::InL2: return "L2";
    case Membership::Other: return "other";
  }
  return "other";
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Synchronized: return "synchronized";
    case Regime::Desynchronized: return "desynchronized";
    case Regime::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Classification classification_from_string(const std::string& s) {
  for (auto c : {Classification::LocalMin, Classification::Saddle, Classification::HigherIndex,
                 Classification::LocalMax, Classification::Degenerate}) {
    if (to_string(c) == s) return c;
  }
  throw DomainError("unknown classification: " + s);
}

Membership membership_from_string(const std::string& s) {
  for (auto m : {Membership::Uniform, Membership::InS2, Membership::InL2, Membership::Other}) {
    if (to_string(m) == s) return m;
  }
  throw DomainError("unknown membership: " + s);
}

Regime regime_from_string(const std::string& s) {
  for (auto r : {Regime::Synchronized, Regime::Desynchronized, Regime::Indeterminate}) {
    if (to_string(r) == s) return r;
  }
  throw DomainError("unknown regime: " + s);
}

Classification classify_spectrum(const std::vector<double>& spectrum, double tol) {
  int negative = 0;
  for (double l : spectrum) {
    if (std::abs(l) <= tol) return Classification::Degenerate;
    if (l < 0.0) ++negative;
  }
  if (negative == 0) return Classification::LocalMin;
  if (negative == 1) return Classification::Saddle;
  if (negative == static_cast<int>(spectrum.size())) return Classification::LocalMax;
  return Classification::HigherIndex;
}

Membership membership_of(const ModelParams& params, const PairMagnetization& x) {
  return membership_with(params, branches_for(params), x);
}

void summarize(LandscapeSummary& s) {
  s.minima_order.clear();
  s.lowest_saddles.clear();
  bool degenerate = false;
  double lowest_saddle = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = s.points[i];
    if (p.classification == Classification::LocalMin) s.minima_order.push_back(i);
    if (p.classification == Classification::Saddle) lowest_saddle = std::min(lowest_saddle, p.value);
    if (p.classification == Classification::Degenerate) degenerate = true;
  }
  std::stable_sort(s.minima_order.begin(), s.minima_order.end(),
                   [&](std::size_t a, std::size_t b) { return s.points[a].value < s.points[b].value; });
  if (std::isfinite(lowest_saddle)) {
    const double band = 1e-10 * std::max(1.0, std::abs(lowest_saddle));
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto& p = s.points[i];
      if (p.classification == Classification::Saddle && p.value <= lowest_saddle + band) {
        s.lowest_saddles.push_back(i);
      }
    }
  }
  if (degenerate || s.minima_order.empty() ||
      (s.minima_order.size() > 1 && s.lowest_saddles.empty())) {
    s.regime = Regime::Indeterminate;
    return;
  }
  bool sync = true;
  for (std::size_t i : s.minima_order) sync = sync && sync_compatible(s.points[i].membership);
  for (std::size_t i : s.lowest_saddles) sync = sync && sync_compatible(s.points[i].membership);
  s.regime = sync ? Regime::Synchronized : Regime::Desynchronized;
}

LandscapeSummary find_critical_points(const ModelParams& params, int grid_density) {
  params.require_analysable();
  if (grid_density < 8) throw DomainError("grid_density must be at least 8");
  const Problem pb{LandscapeCoefficients::of(params), static_cast<std::size_t>(params.q)};
  const std::vector<Vec> starts = start_grid(pb.q, grid_density);

  // Each worker handles a contiguous block and keeps its own deduplicated list;
  // blocks are merged in order, so the result does not depend on the thread count.
  const int workers = std::max(1, std::min<int>(thread_count(), static_cast<int>(starts.size())));
  std::vector<std::vector<Vec>> partial(workers);
  auto work = [&](int w) {
    const std::size_t lo = starts.size() * w / workers;
    const std::size_t hi = starts.size() * (w + 1) / workers;
    for (std::size_t i = lo; i < hi; ++i) {
      if (auto x = newton(pb, starts[i]); x && !is_duplicate(partial[w], *x)) {
        partial[w].push_back(*x);
      }
      if (auto x = newton(pb, descend(pb, starts[i])); x && !is_duplicate(partial[w], *x)) {
        partial[w].push_back(*x);
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  std::vector<Vec> found;
  for (const auto& part : partial) {
    for (const auto& x : part) {
      if (!is_duplicate(found, x)) found.push_back(x);
    }
  }
  // Close the set under the symmetry group; images are re-polished.
  auto close_orbits = [&] {
    const std::size_t base = found.size();
    for (std::size_t i = 0; i < base; ++i) {
      for (const Vec& img : orbit(found[i], pb.q)) {
        if (is_duplicate(found, img)) continue;
        if (auto x = newton(pb, img); x && !is_duplicate(found, *x)) found.push_back(*x);
      }
    }
  };
  close_orbits();
  // Saddles between minima can sit in thin basins near the boundary; seed
  // Newton along the segments joining pairs of minima.
  std::vector<Vec> minima;
  for (const Vec& x : found) {
    Mat h;
    hess_at(pb, x, h);
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() > kDegenerateTol) minima.push_back(x);
  }
  for (std::size_t i = 0; i < minima.size(); ++i) {
    for (std::size_t k = i + 1; k < minima.size(); ++k) {
      for (double t : {0.25, 0.5, 0.75}) {
        if (auto x = newton(pb, (1.0 - t) * minima[i] + t * minima[k]); x && !is_duplicate(found, *x)) {
          found.push_back(*x);
        }
      }
    }
  }
  close_orbits();

  const Branches br = branches_for(params);
  LandscapeSummary summary{params, {}, {}, {}, Regime::Indeterminate};
  for (const Vec& x : found) {
    const ReducedPoint r(std::vector<double>(x.data(), x.data() + x.size()));
    const PairMagnetization loc = embed(r);
    Mat h;
    hess_at(pb, x, h);
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    std::vector<double> spec(es.eigenvalues().data(), es.eigenvalues().data() + x.size());
    std::sort(spec.begin(), spec.end());
    CriticalPoint cp{loc, landscape_value(params, loc), spec, 0, classify_spectrum(spec),
                     membership_with(params, br, loc)};
    cp.morse_index = static_cast<int>(
        std::count_if(spec.begin(), spec.end(), [](double l) { return l < -kDegenerateTol; }));
    summary.points.push_back(std::move(cp));
  }
  std::sort(summary.points.begin(), summary.points.end(), less_point);
  summarize(summary);
  if (summary.minima_order.empty() &&
      std::none_of(summary.points.begin(), summary.points.end(), [](const CriticalPoint& p) {
        return p.classification == Classification::Degenerate;
      })) {
    throw SolverError("no local minimum found for " + to_string(params));
  }
  return summary;
}

Classification classify_symmetric(const ModelParams& params, double s, double t) {
  params.require_analysable();
  const auto c = LandscapeCoefficients::of(params);
  const double a = c.intra, b = c.inter, T = c.temperature;
  if (params.q == 2) {
    if (!(s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0)) throw DomainError("q = 2 point needs s, t in (0, 1)");
    // Hessian [[T/(s(1-s)) - 2a, -2b], [-2b, T/(t(1-t)) - 2a]].
    const double p = T / (s * (1.0 - s)) - 2.0 * a;
    const double r = T / (t * (1.0 - t)) - 2.0 * a;
    if (b > 0.0 && params.coupling.is_finite()) {
      // 2J [[Theta'(2s-1), -1], [-1, Theta'(2t-1)]]
      const double ps = p / (2.0 * b), rs = r / (2.0 * b);
      return classify_blocks({{ps + rs, ps * rs - 1.0}}, 2);
    }
    return classify_blocks({{p + r, p * r - 4.0 * b * b}}, 2);
  }
  if (!(s > 0.0 && s < 0.5 && t > 0.0 && t < 0.5)) throw DomainError("q = 3 point needs s, t in (0, 1/2)");
  std::vector<std::array<double, 2>> crit(2);
  if (b > 0.0 && params.coupling.is_finite()) {
    const double j = params.coupling.j();
    const double fs = phi_prime(s, params.beta, j), ft = phi_prime(t, params.beta, j);
    const double gs = psi_fn_prime(s, params.beta, j), gt = psi_fn_prime(t, params.beta, j);
    crit[0] = {fs + ft, fs * ft - 1.0};
    crit[1] = {gs + gt, gs * gt - 1.0};
  } else {
    const double s1 = T / s, t1 = T / t, s2 = T / (1.0 - 2.0 * s), t2 = T / (1.0 - 2.0 * t);
    const double p = s1 - a, r = t1 - a;
    const double ps = s1 + 2.0 * s2 - 3.0 * a, rs = t1 + 2.0 * t2 - 3.0 * a;
    crit[0] = {p + r, p * r - b * b};
    crit[1] = {ps + rs, ps * rs - 9.0 * b * b};
  }
  return classify_blocks(crit, 4);
}

MinimaOrdering minima_ordering(const LandscapeSummary& summary) {
  MinimaOrdering out;
  if (summary.minima_order.empty()) throw DomainError("summary holds no local minimum");
  const double lowest = summary.points[summary.minima_order.front()].value;
  for (std::size_t i : summary.minima_order) {
    out.minima.push_back({i, summary.points[i].value, summary.points[i].value - lowest});
  }
  const auto& params = summary.params;
  auto has_min = [&](auto pred) {
    for (std::size_t i : summary.minima_order) {
      if (pred(summary.points[i])) return std::optional<std::size_t>(i);
    }
    return std::optional<std::size_t>();
  };
  if (params.q == 3) {
    auto uni = has_min([](const CriticalPoint& p) { return p.membership == Membership::Uniform; });
    auto fam = has_min([](const CriticalPoint& p) { return p.membership == Membership::InS2; });
    if (uni && fam) {
      const auto c = LandscapeCoefficients::of(params);
      out.s2_minus_uniform = (c.intra + c.inter) * f_tilde(solve_branches(params.beta).x_s);
    }
  } else if (params.q == 2 && params.coupling.is_finite()) {
    auto diag = has_min([](const CriticalPoint& p) { return p.membership == Membership::InS2; });
    auto anti = has_min([](const CriticalPoint& p) {
      return p.membership == Membership::Other &&
             std::abs(p.location.first[0] - p.location.second[1]) <= kMembershipTol;
    });
    if (diag && anti) {
      const double s1 = std::abs(2.0 * summary.points[*diag].location.first[0] - 1.0);
      const double s2 = std::abs(2.0 * summary.points[*anti].location.first[0] - 1.0);
      const double j = params.coupling.j();
      out.antidiagonal_minus_diagonal = ((1.0 + j) / params.beta) * (f_compare(s1) - f_compare(s2));
    }
  }
  return out;
}

}  // namespace cwp
