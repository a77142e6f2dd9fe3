#include "ntn/runner.hpp"

#include <chrono>

#include <fmt/format.h>

#ifndef NTN_VERSION
#define NTN_VERSION "0.0.0-unknown"
#endif

namespace ntn {

std::string version_string() { return NTN_VERSION; }

RunOutput run_scenario(const ScenarioConfig& config, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    RunOutput out{ResultTable({"empty"}), {}, 0, 0.0};
    switch (config.scenario) {
    case Scenario::adhoc: {
        const auto sweep = sweep_latency(adhoc_config(config), threads);
        out.main = sweep.table();
        out.failed_trials = sweep.failed_trials;
        break;
    }
    case Scenario::cellfree_energy: {
        const auto c = cellfree_config(config);
        const auto result = simulate_ee_cdf(c, threads);
        out.main = result.cdf_table(c);
        out.extra.emplace_back("summary", result.summary_table());
        out.failed_trials = result.failed_trials;
        break;
    }
    case Scenario::coverage: {
        const auto sweep = sweep_coverage(coverage_config(config), threads);
        out.main = sweep.table();
        out.failed_trials = sweep.failed_trials;
        break;
    }
    case Scenario::iab: {
        const auto result = run_iab(iab_config(config), threads);
        out.main = result.heatmap_table();
        out.extra.emplace_back("aggregates", result.aggregates_table());
        out.failed_trials = result.failed_trials;
        break;
    }
    }
    out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    auto stamp = [&](ResultTable& t) {
        t.add_metadata("scenario", to_string(config.scenario));
        t.add_metadata("config", config.echo());
        t.add_metadata("seed", std::to_string(config.seed));
        t.add_metadata("version", version_string());
        t.add_metadata("failed_trials", std::to_string(out.failed_trials));
        t.add_metadata("wall_time_s", fmt::format("{:.3f}", out.wall_time_s));
    };
    stamp(out.main);
    for (auto& [suffix, table] : out.extra) stamp(table);
    return out;
}

std::filesystem::path sibling_path(const std::filesystem::path& main, const std::string& suffix) {
    auto p = main;
    const std::string ext = main.has_extension() ? main.extension().string() : std::string(".csv");
    p.replace_filename(main.stem().string() + "_" + suffix + ext);
    return p;
}

void write_outputs(const RunOutput& output, const std::filesystem::path& main_path) {
    output.main.write(main_path);
    for (const auto& [suffix, table] : output.extra) table.write(sibling_path(main_path, suffix));
}

} // namespace ntn
