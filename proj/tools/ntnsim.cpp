// ntnsim: command-line front end for the four scenarios.

#include "ntn/config.hpp"
#include "ntn/errors.hpp"
#include "ntn/runner.hpp"
#include "ntn/trials.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <optional>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitScenario = 3;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator for UAV/HAPS/satellite networks"};
    app.set_version_flag("--version", ntn::version_string());

    std::string scenario;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::string out_path;
    std::vector<std::string> overrides;
    unsigned threads = ntn::default_threads();
    bool print_config = false;

    app.add_option("scenario", scenario, "adhoc | cellfree-energy | coverage | iab")
        ->required()
        ->check(CLI::IsMember({"adhoc", "cellfree-energy", "coverage", "iab"}));
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", seed, "64-bit seed (overrides the config)");
    app.add_option("--trials", trials, "trial count (overrides the config)");
    app.add_option("--out", out_path, "output CSV path (default: stdout)");
    app.add_option("--override", overrides, "key.path=value, repeatable")->take_all();
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--print-config", print_config, "print the resolved config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    ntn::ScenarioConfig config;
    try {
        if (seed) overrides.push_back(fmt::format("seed={}", *seed));
        if (trials) overrides.push_back(fmt::format("trials={}", *trials));
        std::optional<std::filesystem::path> file;
        if (!config_path.empty()) file = config_path;
        config = ntn::load_config(file, overrides, scenario);
    } catch (const ntn::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kExitConfig;
    }

    if (print_config) {
        fmt::print("{}\n", config.doc.dump(2));
        return 0;
    }

    try {
        const auto output = ntn::run_scenario(config, threads);
        if (out_path.empty()) {
            fmt::print("{}", output.main.to_csv());
            for (const auto& [suffix, table] : output.extra) fmt::print("\n# table: {}\n{}", suffix, table.to_csv());
        } else {
            ntn::write_outputs(output, out_path);
        }
        if (output.failed_trials > 0)
            fmt::print(stderr, "warning: {} trial(s) failed and were excluded\n", output.failed_trials);
    } catch (const ntn::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        fmt::print(stderr, "scenario error: {}\n", e.what());
        return kExitScenario;
    }
    return 0;
}
