#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwp/critical.hpp"
#include "cwp/phase.hpp"

namespace cwp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitSolver = 3;

// args excludes the program name.  The artifact goes to --output (default
// stdout, written to `out`); diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::ordered_json to_json(const ModelParams& p);
ModelParams params_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const LandscapeSummary& s);
LandscapeSummary summary_from_json(const nlohmann::ordered_json& j);

// start:stop:count
Range parse_range(const std::string& text);

std::string format_double(double v);
std::string phase_csv(const std::vector<PhaseSample>& samples);

}  // namespace cwp
