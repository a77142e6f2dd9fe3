#pragma once

#include "ntn/config.hpp"
#include "ntn/result_table.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ntn {

struct RunOutput {
    ResultTable main;
    /// Secondary tables written next to the main CSV as "<stem>_<suffix>.csv".
    std::vector<std::pair<std::string, ResultTable>> extra;
    std::size_t failed_trials = 0;
    double wall_time_s = 0.0;
};

/// Runs the configured scenario and stamps every table with the metadata block.
RunOutput run_scenario(const ScenarioConfig& config, unsigned threads);

/// Path of a secondary table: results.csv + "summary" -> results_summary.csv.
std::filesystem::path sibling_path(const std::filesystem::path& main, const std::string& suffix);

void write_outputs(const RunOutput& output, const std::filesystem::path& main_path);

std::string version_string();

} // namespace ntn
