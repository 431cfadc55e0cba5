#pragma once

// JSON scenarios and reports binding the library operations together.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "saari/core.hpp"
#include "saari/csv.hpp"

namespace saari {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Known kinds: central-config, rigidity, kronecker, kepler-expand,
/// planetary-saari, action-min, integrate.
const std::vector<std::string>& scenario_kinds();

struct Scenario {
    std::string kind;
    Json parameters = Json::object();
    std::uint64_t seed = 1;
    Tolerances tolerances;
};

/// Parses and validates scenario JSON. ParseError messages carry the
/// source name with line:column for syntax errors, or the offending field.
Scenario parse_scenario(const std::string& text, const std::string& source = "<inline>");
Scenario load_scenario(const std::string& path);
Json scenario_to_json(const Scenario& s);

struct RunOptions {
    std::optional<std::uint64_t> seed;  ///< overrides the scenario seed
    unsigned threads = 1;
};

struct Report {
    Json json;                  ///< scenario, results, verdicts, tables, provenance
    std::vector<Series> series;  ///< per-step tables, also written as CSV
};

/// Dispatches to the module operations for the scenario kind. Module
/// errors propagate with the kind prefixed to the message.
Report run_scenario(const Scenario& scenario, const RunOptions& opts = {});

}  // namespace saari
