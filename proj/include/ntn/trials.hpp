#pragma once

#include "ntn/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace ntn {

template <class R>
struct TrialBatch {
    /// One entry per trial, in trial-index order; empty when the trial threw.
    std::vector<std::optional<R>> results;
    std::vector<std::string> errors;
    std::size_t failed = 0;
};

/// Runs `fn(index, trial_seed)` for every trial index. Each trial gets its own
/// seed derived from (seed, index), and results are stored by index, so the
/// outcome does not depend on `threads`. A trial that throws is recorded as
/// failed and the run continues.
template <class F>
auto run_trials(std::size_t trials, std::uint64_t seed, unsigned threads, F&& fn)
    -> TrialBatch<std::invoke_result_t<F&, std::size_t, std::uint64_t>> {
    using R = std::invoke_result_t<F&, std::size_t, std::uint64_t>;
    TrialBatch<R> batch;
    batch.results.resize(trials);
    std::vector<std::string> errors(trials);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) {
            try {
                batch.results[i].emplace(fn(i, derive_seed(seed, streams::trial, i)));
            } catch (const std::exception& e) {
                errors[i] = e.what();
                if (errors[i].empty()) errors[i] = "unknown error";
            } catch (...) {
                errors[i] = "unknown error";
            }
        }
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < trials; ++i) {
        if (!batch.results[i]) {
            ++batch.failed;
            batch.errors.push_back(std::to_string(i) + ": " + errors[i]);
        }
    }
    return batch;
}

/// Hardware concurrency with a floor of one.
inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

} // namespace ntn
