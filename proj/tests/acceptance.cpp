// One PASS/FAIL line per acceptance criterion.  Exit status is the number of
// failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cwp/critical.hpp"
#include "cwp/finite.hpp"
#include "cwp/intersections.hpp"
#include "cwp/landscape.hpp"
#include "cwp/phase.hpp"
#include "cwp/scalar.hpp"

using namespace cwp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Census {
  int min = 0, saddle = 0, higher = 0, max = 0, degenerate = 0;
};

Census census(const LandscapeSummary& s) {
  Census c;
  for (const auto& p : s.points) {
    switch (p.classification) {
      case Classification::LocalMin: ++c.min; break;
      case Classification::Saddle: ++c.saddle; break;
      case Classification::HigherIndex: ++c.higher; break;
      case Classification::LocalMax: ++c.max; break;
      case Classification::Degenerate: ++c.degenerate; break;
    }
  }
  return c;
}

const CriticalPoint* uniform_point(const LandscapeSummary& s) {
  for (const auto& p : s.points) {
    if (p.membership == Membership::Uniform) return &p;
  }
  return nullptr;
}

double sup_distance(const PairMagnetization& a, const PairMagnetization& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.q(); ++i) {
    d = std::max({d, std::abs(a.first[i] - b.first[i]), std::abs(a.second[i] - b.second[i])});
  }
  return d;
}

// criteria

Outcome constants() {
  Outcome o;
  const auto& c = critical_constants();
  o.check(std::abs(c.m1 - 0.2076) <= 1e-3, fmt("m1=%.6f", c.m1));
  o.check(std::abs(c.beta1 - 2.7465) <= 1e-3, fmt("beta1=%.6f", c.beta1));
  o.check(c.beta2 == 4.0 * std::log(2.0) && std::abs(c.beta2 - 2.7726) <= 1e-4, fmt("beta2=%.6f", c.beta2));
  o.check(c.beta3 == 3.0, fmt("beta3=%.17g", c.beta3));
  o.check(std::abs(c.jc - 0.2419) <= 1e-3, fmt("Jc=%.6f", c.jc));
  if (o.pass) {
    o.detail = fmt("m1=%.6f beta1=%.6f beta2=%.6f", c.m1, c.beta1, c.beta2) + fmt(" Jc=%.6f", c.jc);
  }
  return o;
}

Outcome crossings_ab() {
  Outcome o;
  const auto& x = crossings();
  o.check(std::abs(x.a - 3.1255) <= 5e-3, fmt("A=%.5f", x.a));
  o.check(std::abs(x.b - 3.8290) <= 5e-3, fmt("B=%.5f", x.b));
  if (o.pass) o.detail = fmt("A=%.5f B=%.5f", x.a, x.b);
  return o;
}

Outcome binary_census() {
  Outcome o;
  const double z1 = zeta1(4.0), z2 = zeta2(4.0);
  struct Case {
    double j;
    Census want;
  };
  const std::vector<Case> cases{{0.5, {2, 1, 0, 0, 0}}, {(z1 + z2) / 2, {2, 2, 0, 1, 0}}, {0.1, {4, 4, 0, 1, 0}}};
  o.pass = 0.5 > z1 && 0.1 < z2;
  if (!o.pass) o.detail = fmt("zeta1=%.6f zeta2=%.6f do not bracket the cases", z1, z2);
  for (const auto& cs : cases) {
    const auto s = find_critical_points(ModelParams::finite(2, 4.0, cs.j), 16);
    const Census c = census(s);
    const bool ok = c.min == cs.want.min && c.saddle == cs.want.saddle && c.higher == cs.want.higher &&
                    c.max == cs.want.max && c.degenerate == 0;
    o.check(ok, fmt("J=%.4f: %g min %g saddle", cs.j, c.min, c.saddle) + fmt(" %g max", c.max));
    if (cs.j == 0.1 && ok) {
      const auto ord = minima_ordering(s);
      bool diag_lower = ord.minima.size() == 4;
      for (int i = 0; diag_lower && i < 4; ++i) {
        const auto& p = s.points[ord.minima[i].index].location;
        const bool diagonal = std::abs(p.first[0] - p.second[0]) < 1e-9;
        diag_lower = diagonal == (i < 2);
      }
      if (diag_lower) diag_lower = ord.minima[2].value > ord.minima[1].value + 1e-12;
      o.check(diag_lower, "diagonal minima not strictly lower at J=0.1");
    }
  }
  if (o.pass) o.detail = fmt("zeta1(4)=%.6f zeta2(4)=%.6f", z1, z2);
  return o;
}

Outcome extreme_cases() {
  Outcome o;
  const auto& cc = critical_constants();
  for (double beta : {2.76, 2.9, 3.5}) {
    const auto s0 = find_critical_points(ModelParams::finite(3, beta, 0.0), 16);
    const Census c0 = census(s0);
    const auto* u0 = uniform_point(s0);
    const bool above = beta > cc.beta3;
    // expected: 9 minima + 18 saddles besides the uniform point
    const int want_min = above ? 9 : 10;
    const bool uniform_ok =
        u0 && (above ? u0->classification == Classification::LocalMax : u0->classification == Classification::LocalMin);
    o.check(c0.min == want_min && c0.saddle == 18 && uniform_ok,
            fmt("J=0 beta=%.2f: %g minima, %g saddles", beta, c0.min, c0.saddle) +
                fmt(" (expected %g and 18)", want_min));

    const auto si = find_critical_points(ModelParams::no_componentwise(3, beta), 16);
    const Census ci = census(si);
    const auto* ui = uniform_point(si);
    int s2_min = 0;
    double s2_value = INFINITY;
    for (const auto& p : si.points) {
      if (p.classification == Classification::LocalMin && p.membership == Membership::InS2) {
        ++s2_min;
        s2_value = std::min(s2_value, p.value);
      }
    }
    bool inf_ok = s2_min == 3 && ci.saddle == 3 && ci.min == (above ? 3 : 4) && ui;
    if (inf_ok && !above) {
      const bool uniform_global = ui->value < s2_value;
      inf_ok = ui->classification == Classification::LocalMin && uniform_global == (beta < cc.beta2);
    }
    if (inf_ok && above) inf_ok = ui->classification != Classification::LocalMin;
    o.check(inf_ok, fmt("J=inf beta=%.2f: %g minima, %g saddles", beta, ci.min, ci.saddle));
  }
  return o;
}

Outcome regime_agreement() {
  Outcome o;
  int determined = 0, agree = 0, banded = 0, indeterminate = 0;
  for (const auto& r : sweep(3, Range{0.5, 6.0, 20}, Range{0.0, 0.6, 20}, true)) {
    if (r.error) {
      o.check(false, fmt("error at beta=%.4f J=%.4f", r.beta, r.j) + ": " + *r.error);
      continue;
    }
    if (std::abs(r.j - psi_sync(r.beta)) < 0.01 || std::abs(r.j - psi_desync(r.beta)) < 0.01) {
      ++banded;
      continue;
    }
    if (r.analytic_regime == AnalyticRegime::Unresolved) continue;
    if (*r.numeric_regime == Regime::Indeterminate) {
      ++indeterminate;
      continue;
    }
    ++determined;
    const Regime want =
        r.analytic_regime == AnalyticRegime::Synchronized ? Regime::Synchronized : Regime::Desynchronized;
    if (*r.numeric_regime == want) {
      ++agree;
    } else {
      o.check(false, fmt("disagree at beta=%.4f J=%.4f", r.beta, r.j));
    }
  }
  o.check(determined > 0, "no determined nodes");
  const std::string counts = fmt("%g determined, %g agree", determined, agree) +
                             fmt(", %g banded, %g numerically indeterminate", banded, indeterminate);
  o.detail = o.detail.empty() ? counts : counts + "; " + o.detail;
  return o;
}

Outcome sums() {
  const double jc = critical_constants().jc;
  const double slack = 1e-8;
  const int grid = 200;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> beta_d(0.5, 6.0), unit(0.0, 1.0);
  int two_p_fail = 0, prs_mono_fail = 0, prs_convex_fail = 0, pqrs_fail = 0, psi3_fail = 0;
  int two_p_draws = 0, prs_draws = 0, pqrs_draws = 0, psi3_draws = 0;
  double worst_psi3 = INFINITY;
  for (int draw = 0; draw < 50; ++draw) {
    const double b = beta_d(rng);

    // 2P+Q on the two-point range between the tangency and the four-point threshold
    {
      const double j = 0.02 + 0.96 * unit(rng);
      const double t = tangency_shift(b, j), u4 = four_point_threshold(b, j);
      double last = -INFINITY;
      bool ok = true;
      for (int i = 0; i < grid; ++i) {
        const double u = t + (u4 - t) * (1e-4 + (1.0 - 2e-4) * i / (grid - 1.0));
        const auto d = sum_diagnostics(b, j, u, u);
        if (!d.two_p_plus_q) continue;
        if (*d.two_p_plus_q < last - slack) ok = false;
        last = *d.two_p_plus_q;
      }
      ++two_p_draws;
      two_p_fail += !ok;
    }

    // P+R+S for J >= Jc: nondecreasing and convex above the four-point threshold
    {
      const double j = jc + (0.98 - jc) * unit(rng);
      const double c = (1.0 + j) / b, u4 = four_point_threshold(b, j);
      std::vector<double> v;
      for (int i = 0; i < grid; ++i) {
        const auto s = prs_sum(b, j, u4 + c * (1e-3 + 5.0 * i / (grid - 1.0)));
        if (s) v.push_back(*s);
      }
      bool mono = v.size() > 2, convex = v.size() > 2;
      for (std::size_t i = 1; i < v.size(); ++i) mono = mono && v[i] >= v[i - 1] - slack;
      for (std::size_t i = 2; i < v.size(); ++i) convex = convex && v[i] - 2 * v[i - 1] + v[i - 2] >= -slack;
      ++prs_draws;
      prs_mono_fail += !mono;
      prs_convex_fail += !convex;
    }

    // the four off-diagonal items with u > v
    {
      const double j = 0.02 + 0.78 * unit(rng);
      const double c = (1.0 + j) / b;
      const double v = four_point_threshold(b, j) + c * (0.05 + 2.0 * unit(rng));
      std::vector<SumDiagnostics> ds;
      for (int i = 0; i < grid; ++i) {
        const auto d = sum_diagnostics(b, j, v + c * (1e-3 + 3.0 * i / (grid - 1.0)), v);
        if (!d.p2_r2_s2) break;
        ds.push_back(d);
      }
      if (ds.size() >= 2) {
        bool ok = true;
        for (std::size_t i = 0; i < ds.size(); ++i) {
          ok = ok && *ds[i].p2_r2_q2 > *ds[i].p2_r2_s2;
          if (i == 0) continue;
          ok = ok && *ds[i].p2_r2_s2 >= *ds[i - 1].p2_r2_s2 - slack;
          ok = ok && *ds[i].r1_s1_q1 >= *ds[i - 1].r1_s1_q1 - slack;
          ok = ok && *ds[i].p1_s1_q1 >= *ds[i - 1].p1_s1_q1 - slack;
        }
        ++pqrs_draws;
        pqrs_fail += !ok;
      }
    }

    // J in (psi3, 1/2): minimum of P+R+S over the four-point regime above 1
    {
      const double lo = psi3(b);
      if (lo < 0.5) {
        const double j = lo + (0.5 - lo) * (1e-3 + 0.998 * unit(rng));
        const auto r = prs_minimum_exceeds_one(b, j, grid);
        if (r.grid_minimum) {
          ++psi3_draws;
          worst_psi3 = std::min(worst_psi3, *r.grid_minimum);
          psi3_fail += !(*r.grid_minimum > 1.0 - slack);
        }
      }
    }
  }
  Outcome o;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "failing draws: 2P+Q %d/%d, P+R+S monotone %d/%d, P+R+S convex %d/%d, "
                "off-diagonal items %d/%d, psi3 bound %d/%d (lowest min %.4f)",
                two_p_fail, two_p_draws, prs_mono_fail, prs_draws, prs_convex_fail, prs_draws, pqrs_fail,
                pqrs_draws, psi3_fail, psi3_draws, worst_psi3);
  o.pass = two_p_fail + prs_mono_fail + prs_convex_fail + pqrs_fail + psi3_fail == 0 && pqrs_draws > 0 &&
           psi3_draws > 0;
  o.detail = buf;
  return o;
}

Outcome differential() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> beta_d(0.5, 8.0), j_d(0.0, 2.0), unit(0.0, 1.0);
  std::gamma_distribution<double> g(1.0, 1.0);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-5 || std::abs(a - b) <= 1e-6 * std::abs(b); };
  int grad_bad = 0, hess_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int q = trial % 4 == 3 ? 2 : 3;
    const ModelParams p = trial % 5 == 4 ? ModelParams::no_componentwise(q, beta_d(rng))
                                         : ModelParams::finite(q, beta_d(rng), j_d(rng));
    std::vector<double> coords;
    for (int k = 0; k < 2; ++k) {
      std::vector<double> w(q);
      double sum = 0.0;
      for (auto& v : w) sum += (v = g(rng));
      for (int i = 0; i + 1 < q; ++i) coords.push_back(0.02 + (1.0 - 0.02 * q) * w[i] / sum);
    }
    const ReducedPoint r(coords);
    const auto grad = gradient(p, r);
    const Eigen::MatrixXd h = hessian(p, r);
    const double step = 1e-6;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      auto up = coords, dn = coords;
      up[i] += step;
      dn[i] -= step;
      const double fd =
          (landscape_value(p, embed(ReducedPoint(up))) - landscape_value(p, embed(ReducedPoint(dn)))) / (2 * step);
      grad_bad += !close(grad[i], fd);
      const auto gu = gradient(p, ReducedPoint(up)), gd = gradient(p, ReducedPoint(dn));
      for (std::size_t k = 0; k < coords.size(); ++k) hess_bad += !close(h(k, i), (gu[k] - gd[k]) / (2 * step));
    }
  }
  int spec_bad = 0;
  double worst = 0.0;
  std::uniform_real_distribution<double> coord(0.01, 0.49);
  for (int trial = 0; trial < 1000; ++trial) {
    const ModelParams p = trial % 5 == 4 ? ModelParams::no_componentwise(3, beta_d(rng))
                                         : ModelParams::finite(3, beta_d(rng), j_d(rng));
    const double s = coord(rng), t = coord(rng);
    auto fast = symmetric_spectrum(p, s, t);
    std::sort(fast.begin(), fast.end());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian(p, ReducedPoint({s, s, t, t})));
    for (int i = 0; i < 4; ++i) {
      const double e = std::abs(fast[i] - es.eigenvalues()[i]);
      worst = std::max(worst, e);
      spec_bad += e > 1e-8;
    }
  }
  o.check(grad_bad == 0, fmt("%g gradient entries off", grad_bad));
  o.check(hess_bad == 0, fmt("%g Hessian entries off", hess_bad));
  o.check(spec_bad == 0, fmt("%g eigenvalues off", spec_bad));
  if (o.pass) o.detail = fmt("1000 + 1000 points, worst eigenvalue gap %.2e", worst);
  return o;
}

// Magnetization law by enumerating all q^(2N) configurations.
std::map<std::pair<std::vector<int>, std::vector<int>>, double> enumerate_nu(int n, int q, double beta, double j) {
  std::map<std::pair<std::vector<int>, std::vector<int>>, double> w;
  std::vector<int> s(2 * n);
  long total = 1;
  for (int i = 0; i < 2 * n; ++i) total *= q;
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < 2 * n; ++i, c /= q) s[i] = static_cast<int>(c % q);
    double same = 0, cross = 0;
    for (int i = 0; i < n; ++i) {
      for (int k = i + 1; k < n; ++k) same += (s[i] == s[k]) + (s[n + i] == s[n + k]);
      for (int k = 0; k < n; ++k) cross += s[i] == s[n + k];
    }
    std::pair<std::vector<int>, std::vector<int>> key{std::vector<int>(q), std::vector<int>(q)};
    for (int i = 0; i < n; ++i) {
      ++key.first[s[i]];
      ++key.second[s[n + i]];
    }
    w[key] += std::exp(beta * (same + j * cross) / ((1.0 + j) * n));
  }
  double z = 0;
  for (const auto& [k, v] : w) z += v;
  for (auto& [k, v] : w) v = std::log(v / z);
  return w;
}

Outcome finite_oracle() {
  Outcome o;
  double worst = 0.0;
  for (int q : {2, 3}) {
    for (int n = 1; n <= 4; ++n) {
      for (const auto& [beta, j] : std::vector<std::pair<double, double>>{{1.0, 0.3}, {4.0, 0.1}, {6.0, 0.8}}) {
        const auto t = exact_nu(n, ModelParams::finite(q, beta, j));
        const auto ref = enumerate_nu(n, q, beta, j);
        if (ref.size() != t.size()) o.check(false, "table size mismatch");
        for (const auto& [k, lp] : ref) {
          const auto got = t.log_prob(LatticePoint{k.first, k.second});
          worst = std::max(worst, got ? std::abs(*got - lp) : INFINITY);
        }
      }
    }
  }
  o.check(worst <= 1e-10, fmt("enumeration gap %.2e", worst));

  // high temperature, synchronized, desynchronized
  std::string spots;
  for (const auto& [beta, j] : std::vector<std::pair<double, double>>{{2.0, 0.5}, {4.625, 0.5}, {6.0, 0.1}}) {
    const ModelParams p = ModelParams::finite(3, beta, j);
    const auto arg = exact_nu(60, p).argmax().fractions();
    const auto s = find_critical_points(p, 16);
    double best = INFINITY;
    for (const auto& c : s.points) {
      if (c.classification == Classification::LocalMin) best = std::min(best, sup_distance(arg, c.location));
    }
    o.check(best <= 2.0 / 60, fmt("argmax %.4f from a minimum at beta=%.3f", best, beta));
    spots += fmt(" %.4f", best);
  }

  std::string decays;
  for (const auto& p : {ModelParams::finite(3, 2.0, 0.5), ModelParams::finite(3, 6.0, 0.1)}) {
    const auto g = stirling_gap(p);
    o.check(g.fitted_decay < 0 && g.gaps[0] >= g.gaps[1] && g.gaps[1] >= g.gaps[2],
            fmt("Stirling residual not decaying at beta=%.3f", p.beta));
    decays += fmt(" %.3f", g.fitted_decay);
  }
  if (o.pass) o.detail = fmt("enumeration gap %.1e; argmax distances", worst) + spots + "; decay" + decays;
  return o;
}

Outcome ordering_signs() {
  Outcome o;
  int bad = 0;
  for (int i = 1; i < 1000; ++i) {
    const double x = 0.5 * i / 1000.0;
    if (std::abs(x - 1.0 / 6.0) < 1e-9 || std::abs(x - 1.0 / 3.0) < 1e-9) continue;
    const bool positive = f_tilde(x) > 0.0;
    bad += positive != (x > 1.0 / 6.0 && x < 1.0 / 3.0);
  }
  o.check(bad == 0, fmt("F~ wrong sign at %g points", bad));
  int nonincreasing = 0;
  double prev = f_compare(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double v = f_compare(0.99 * i / 1000.0);
    nonincreasing += !(v > prev);
    prev = v;
  }
  o.check(nonincreasing == 0, fmt("f not increasing at %g steps", nonincreasing));
  if (o.pass) o.detail = "F~ signs on 999 points, f increasing over 1000 steps";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"constants", constants},
      {"crossings A and B", crossings_ab},
      {"q=2 census at beta=4", binary_census},
      {"q=3 extreme couplings", extreme_cases},
      {"regime agreement on 20x20 grid", regime_agreement},
      {"monotonicity and convexity suites", sums},
      {"derivatives and factorized spectrum", differential},
      {"finite-N oracle", finite_oracle},
      {"minima-ordering signs", ordering_signs}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("criterion %zu %s: %s (%.2f s) %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
