#include "cwp/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "cwp/finite.hpp"
#include "cwp/landscape.hpp"
#include "cwp/scalar.hpp"

namespace cwp {
namespace {

using json = nlohmann::ordered_json;

struct Options {
  int q = 3;
  double beta = 0.0;
  std::string j = "0";
  std::string output = "-";
  std::string format;
  std::uint64_t seed = 1;
};

Coupling parse_coupling(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return Coupling::no_componentwise();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("invalid --j value: " + text);
  }
  if (used != text.size() || !std::isfinite(v)) throw DomainError("invalid --j value: " + text);
  return Coupling::finite(v);
}

std::string reason_for(int q, double beta, double j, AnalyticRegime r) {
  if (q == 2) {
    if (r == AnalyticRegime::Unresolved) return "on a boundary";
    if (beta < 2.0) return "beta below 2";
    return r == AnalyticRegime::Synchronized ? "J above zeta1" : "J below zeta1";
  }
  if (r == AnalyticRegime::Unresolved) {
    const double s = psi_sync(beta), d = psi_desync(beta);
    if (j > d + kBoundaryBand && j < s - kBoundaryBand) return "J between psi_d and psi_s";
    return "on a boundary";
  }
  if (beta <= critical_constants().beta1) return "beta below beta1";
  return r == AnalyticRegime::Synchronized ? "J above psi_s" : "J below psi_d";
}

json constants_json() {
  const auto& c = critical_constants();
  json j;
  j["m1"] = c.m1;
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["beta3"] = c.beta3;
  j["jc"] = c.jc;
  return j;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string phase_json(const std::vector<PhaseSample>& samples) {
  json arr = json::array();
  for (const auto& s : samples) {
    json row;
    row["beta"] = s.beta;
    row["J"] = s.j;
    for (const auto& [name, v] : s.boundaries) row[name] = optional_json(v);
    row["analytic_regime"] = to_string(s.analytic_regime);
    row["numeric_regime"] = s.numeric_regime ? json(to_string(*s.numeric_regime)) : json(nullptr);
    if (s.error) row["error"] = *s.error;
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

void write_artifact(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-" || path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output path: " + path);
  f << text;
  if (!f) throw DomainError("failed writing output path: " + path);
}

std::string table_csv(const DistributionTable& t) {
  std::ostringstream os;
  t.write_csv(os);
  return os.str();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Range parse_range(const std::string& text) {
  Range r{};
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw DomainError("range must look like start:stop:count, got " + text);
  }
  try {
    std::size_t u1 = 0, u2 = 0, u3 = 0;
    const std::string s1 = text.substr(0, a), s2 = text.substr(a + 1, b - a - 1),
                      s3 = text.substr(b + 1);
    r.start = std::stod(s1, &u1);
    r.stop = std::stod(s2, &u2);
    r.count = std::stoi(s3, &u3);
    if (u1 != s1.size() || u2 != s2.size() || u3 != s3.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw DomainError("range must look like start:stop:count, got " + text);
  }
  if (!std::isfinite(r.start) || !std::isfinite(r.stop) || r.count < 2) {
    throw DomainError("range needs finite bounds and count >= 2: " + text);
  }
  return r;
}

std::string phase_csv(const std::vector<PhaseSample>& samples) {
  std::ostringstream os;
  const bool q2 = !samples.empty() && samples.front().q == 2;
  os << (q2 ? "beta,J,zeta1,zeta2,gamma,analytic_regime,numeric_regime\n"
            : "beta,J,psi1,psi2,psi3,psi_s,psi_d,analytic_regime,numeric_regime\n");
  for (const auto& s : samples) {
    os << format_double(s.beta) << ',' << format_double(s.j);
    for (const auto& [name, v] : s.boundaries) os << ',' << (v ? format_double(*v) : "");
    os << ',' << (s.error ? "error" : to_string(s.analytic_regime)) << ','
       << (s.numeric_regime ? to_string(*s.numeric_regime) : "") << '\n';
  }
  return os.str();
}

json to_json(const ModelParams& p) {
  json j;
  j["q"] = p.q;
  j["beta"] = p.beta;
  j["J"] = p.coupling.is_finite() ? json(p.coupling.j()) : json("inf");
  return j;
}

ModelParams params_from_json(const json& j) {
  const auto& jj = j.at("J");
  const Coupling c = jj.is_string() ? parse_coupling(jj.get<std::string>())
                                    : Coupling::finite(jj.get<double>());
  return ModelParams(j.at("q").get<int>(), j.at("beta").get<double>(), c);
}

json to_json(const LandscapeSummary& s) {
  json j;
  j["params"] = to_json(s.params);
  json pts = json::array();
  for (const auto& p : s.points) {
    json e;
    e["first"] = std::vector<double>(p.location.first.weights().begin(), p.location.first.weights().end());
    e["second"] =
        std::vector<double>(p.location.second.weights().begin(), p.location.second.weights().end());
    e["value"] = p.value;
    e["spectrum"] = p.spectrum;
    e["morse_index"] = p.morse_index;
    e["classification"] = to_string(p.classification);
    e["membership"] = to_string(p.membership);
    pts.push_back(e);
  }
  j["points"] = pts;
  j["minima_order"] = s.minima_order;
  j["lowest_saddles"] = s.lowest_saddles;
  j["regime"] = to_string(s.regime);
  return j;
}

LandscapeSummary summary_from_json(const json& j) {
  LandscapeSummary s{params_from_json(j.at("params")), {}, {}, {}, Regime::Indeterminate};
  for (const auto& e : j.at("points")) {
    CriticalPoint p{PairMagnetization(SimplexPoint(e.at("first").get<std::vector<double>>()),
                                      SimplexPoint(e.at("second").get<std::vector<double>>())),
                    e.at("value").get<double>(),
                    e.at("spectrum").get<std::vector<double>>(),
                    e.at("morse_index").get<int>(),
                    classification_from_string(e.at("classification").get<std::string>()),
                    membership_from_string(e.at("membership").get<std::string>())};
    s.points.push_back(std::move(p));
  }
  s.minima_order = j.at("minima_order").get<std::vector<std::size_t>>();
  s.lowest_saddles = j.at("lowest_saddles").get<std::vector<std::size_t>>();
  s.regime = regime_from_string(j.at("regime").get<std::string>());
  for (std::size_t i : s.minima_order) {
    if (i >= s.points.size()) throw DomainError("minima_order index out of range");
  }
  for (std::size_t i : s.lowest_saddles) {
    if (i >= s.points.size()) throw DomainError("lowest_saddles index out of range");
  }
  return s;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-component Curie-Weiss-Potts landscape toolkit", "cwp"};
  app.require_subcommand(1);
  Options o;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--q", o.q, "spin count (2 or 3)");
    sub->add_option("--beta", o.beta, "inverse temperature")->required();
    sub->add_option("--j", o.j, "coupling ratio J, or inf");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output,-o", o.output, "output path, - for stdout");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", o.seed, "seed for randomized checks");
  };

  auto* eval = app.add_subcommand("eval", "free energy, gradient and Hessian at a point");
  std::vector<double> xs, ys;
  add_model(eval);
  add_output(eval);
  eval->add_option("--x", xs, "first component, comma separated")->delimiter(',')->required();
  eval->add_option("--y", ys, "second component, comma separated")->delimiter(',')->required();

  auto* cps = app.add_subcommand("critical-points", "locate and classify stationary points");
  int grid = 16;
  add_model(cps);
  add_output(cps);
  cps->add_option("--grid", grid, "start grid density (>= 8)");

  auto* cls = app.add_subcommand("classify", "synchronization regime at (beta, J)");
  bool cls_numeric = false;
  add_model(cls);
  add_output(cls);
  cls->add_option("--numeric", cls_numeric, "also run the critical point search");
  cls->add_option("--grid", grid, "start grid density (>= 8)");

  auto* cst = app.add_subcommand("constants", "m1, beta1, beta2, beta3, J_c");
  add_output(cst);

  auto* pd = app.add_subcommand("phase-diagram", "boundary curves and regimes on a grid");
  std::string beta_range, j_range;
  bool pd_numeric = false;
  int pd_q = 3;
  pd->add_option("--q", pd_q, "spin count (2 or 3)");
  pd->add_option("--beta", beta_range, "start:stop:count")->required();
  pd->add_option("--j", j_range, "start:stop:count")->required();
  pd->add_option("--numeric", pd_numeric, "run the critical point search at each node");
  pd->add_option("--grid", grid, "start grid density (>= 8)");
  add_output(pd);

  auto* vf = app.add_subcommand("verify-finite", "exact finite-N checks");
  int n = 10, trials = 100;
  add_model(vf);
  add_output(vf);
  vf->add_option("--n", n, "number of sites per component");
  vf->add_option("--trials", trials, "measurability trials");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  try {
    std::string artifact;
    if (eval->parsed()) {
      const ModelParams p(o.q, o.beta, parse_coupling(o.j));
      if (static_cast<int>(xs.size()) != o.q || static_cast<int>(ys.size()) != o.q) {
        throw DomainError("--x and --y need q values each");
      }
      const PairMagnetization x{SimplexPoint(xs), SimplexPoint(ys)};
      json j;
      j["params"] = to_json(p);
      j["value"] = landscape_value(p, x);
      j["entropy_part"] = entropy_part(x);
      if (p.coupling.is_finite()) j["energy_part"] = energy_part(p, x);
      if (detail::min_coordinate(full_coordinates(reduce(x).coords())) > kBoundaryTol) {
        const auto r = reduce(x);
        j["gradient"] = gradient(p, r);
        const auto h = hessian(p, r);
        json rows = json::array();
        for (int a = 0; a < h.rows(); ++a) {
          std::vector<double> row(h.cols());
          for (int b = 0; b < h.cols(); ++b) row[b] = h(a, b);
          rows.push_back(row);
        }
        j["hessian"] = rows;
      }
      artifact = j.dump(2) + "\n";
    } else if (cps->parsed()) {
      const ModelParams p(o.q, o.beta, parse_coupling(o.j));
      artifact = to_json(find_critical_points(p, grid)).dump(2) + "\n";
    } else if (cls->parsed()) {
      const Coupling c = parse_coupling(o.j);
      const ModelParams p(o.q, o.beta, c);
      p.require_analysable();
      json j;
      j["params"] = to_json(p);
      if (!c.is_finite()) {
        // Without componentwise coupling every stationary point is symmetric.
        j["regime"] = "synchronized";
        j["reason"] = "no componentwise coupling";
      } else {
        const AnalyticRegime r = analytic_regime(o.q, o.beta, c.j());
        j["regime"] = to_string(r);
        j["reason"] = reason_for(o.q, o.beta, c.j(), r);
      }
      if (cls_numeric) j["numeric_regime"] = to_string(find_critical_points(p, grid).regime);
      artifact = j.dump(2) + "\n";
    } else if (cst->parsed()) {
      artifact = constants_json().dump(2) + "\n";
    } else if (pd->parsed()) {
      const auto samples = sweep(pd_q, parse_range(beta_range), parse_range(j_range), pd_numeric, grid);
      artifact = (o.format == "json") ? phase_json(samples) : phase_csv(samples);
    } else if (vf->parsed()) {
      const ModelParams p(o.q, o.beta, parse_coupling(o.j));
      const DistributionTable t = exact_nu(n, p);
      if (o.format == "csv") {
        artifact = table_csv(t);
      } else {
        json j;
        j["params"] = to_json(p);
        j["n"] = n;
        j["total_probability"] = t.total_probability();
        const LatticePoint am = t.argmax();
        j["argmax"] = {{"first", am.first}, {"second", am.second}};
        const auto m = hamiltonian_is_magnetization_measurable(std::min(n, 8), p.q, p.coupling.j(),
                                                               trials, o.seed);
        j["measurable"] = m.holds;
        const auto g = stirling_gap(p);
        j["stirling"] = {{"sizes", g.sizes},
                         {"gaps", g.gaps},
                         {"max_abs_gap", g.max_abs_gap},
                         {"fitted_decay", g.fitted_decay}};
        artifact = j.dump(2) + "\n";
      }
    }
    write_artifact(o.output, artifact, out);
    return kExitOk;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace cwp
