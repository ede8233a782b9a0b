// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "famec/ippso_driver.hpp"

namespace famec {

namespace scheme {
inline constexpr const char* kIppso = "ippso";
inline constexpr const char* kBaselineLocal = "baseline_local";
inline constexpr const char* kBaselineFixed = "baseline_fixed";
} // namespace scheme

struct TaggedResult {
    std::string scheme;
    std::uint64_t seed = 0;
    RunResult result;
};

inline constexpr const char* kTraceFileName = "trace.csv";
inline constexpr const char* kSummaryFileName = "summary.csv";

/// Writes trace.csv and summary.csv into `directory` (created if missing).
///
/// trace.csv: scheme, seed, outer_iter, inner_iter, global_best_fitness,
/// total_latency, beta_1..beta_N, antenna_x_1..antenna_x_M,
/// antenna_y_1..antenna_y_M. One row per recorded inner iteration.
/// summary.csv: scheme, seed, M, N, total_latency, mean_rate_bps,
/// runtime_seconds.
///
/// Rows are ordered by (scheme, seed, M, outer_iter, inner_iter). When runs
/// with different M or N share a file the header is sized for the largest and
/// shorter rows leave the extra cells empty. Runtimes are written as 0 unless
/// `include_runtime` is set, so that repeated runs give identical files.
void export_results(std::span<const TaggedResult> results, const std::filesystem::path& directory,
                    bool include_runtime = false);

} // namespace famec
