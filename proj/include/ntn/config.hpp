#pragma once

#include "ntn/adhoc.hpp"
#include "ntn/cellfree.hpp"
#include "ntn/coverage.hpp"
#include "ntn/iab.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ntn {

enum class Scenario { adhoc, cellfree_energy, coverage, iab };

std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& name);

/// Fully resolved configuration: every key present, defaults applied.
struct ScenarioConfig {
    Scenario scenario = Scenario::adhoc;
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    nlohmann::json doc;

    /// Single-line JSON echo; feeding it back through load_config reproduces the run.
    std::string echo() const;
};

/// Default document with every section and key.
nlohmann::json default_config();

/// Merges `file` (may be empty), then `key.path=value` overrides, onto the
/// defaults. Unknown keys, wrong types, out-of-range values and a missing
/// scenario id raise ConfigError naming the key.
ScenarioConfig load_config(const std::optional<std::filesystem::path>& file,
                           const std::vector<std::string>& overrides = {},
                           const std::optional<std::string>& scenario = std::nullopt);

ScenarioConfig resolve_config(nlohmann::json user, const std::vector<std::string>& overrides = {},
                              const std::optional<std::string>& scenario = std::nullopt);

std::size_t default_trials(Scenario s);

RadioTable radio_table(const nlohmann::json& doc);
AdhocConfig adhoc_config(const ScenarioConfig& config);
CellfreeConfig cellfree_config(const ScenarioConfig& config);
CoverageConfig coverage_config(const ScenarioConfig& config);
IabConfig iab_config(const ScenarioConfig& config);

} // namespace ntn
