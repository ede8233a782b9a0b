// SPDX-License-Identifier: Apache-2.0
#include "famec/export.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>
#include <vector>

#include "famec/config_io.hpp"
#include "famec/errors.hpp"

namespace famec {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path)
{
    out.close();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void append_cells(std::string& row, const std::vector<double>& values, std::size_t width)
{
    for (std::size_t i = 0; i < width; ++i) {
        row += ',';
        if (i < values.size()) {
            row += format_double(values[i]);
        }
    }
}

} // namespace

void export_results(std::span<const TaggedResult> results, const std::filesystem::path& directory,
                    bool include_runtime)
{
    if (results.empty()) {
        throw ValidationError("export_results: no results to export");
    }
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw IoError("cannot create output directory " + directory.string() + ": " + ec.message());
    }

    std::vector<const TaggedResult*> order;
    std::size_t max_users = 0;
    std::size_t max_antennas = 0;
    for (const auto& r : results) {
        order.push_back(&r);
        max_users = std::max(max_users, r.result.final_allocation.offload_ratios.size());
        max_antennas = std::max(max_antennas, r.result.final_positions.size());
    }
    std::stable_sort(order.begin(), order.end(), [](const TaggedResult* a, const TaggedResult* b) {
        return std::tuple(a->scheme, a->seed, a->result.final_positions.size())
               < std::tuple(b->scheme, b->seed, b->result.final_positions.size());
    });

    const auto trace_path = directory / kTraceFileName;
    auto trace = open_for_write(trace_path);
    std::string header = "scheme,seed,outer_iter,inner_iter,global_best_fitness,total_latency";
    for (std::size_t n = 1; n <= max_users; ++n) header += ",beta_" + std::to_string(n);
    for (std::size_t m = 1; m <= max_antennas; ++m) header += ",antenna_x_" + std::to_string(m);
    for (std::size_t m = 1; m <= max_antennas; ++m) header += ",antenna_y_" + std::to_string(m);
    trace << header << '\n';
    for (const auto* tagged : order) {
        const auto& r = tagged->result;
        for (std::size_t k = 0; k < r.inner_traces.size(); ++k) {
            const auto& inner = r.inner_traces[k];
            const auto& betas = k < r.offload_trace.size() ? r.offload_trace[k] : r.final_allocation.offload_ratios;
            for (std::size_t t = 0; t < inner.global_best_fitness.size(); ++t) {
                std::string row = tagged->scheme + ',' + std::to_string(tagged->seed) + ',' + std::to_string(k + 1)
                                  + ',' + std::to_string(t) + ',' + format_double(inner.global_best_fitness[t]) + ','
                                  + format_double(inner.total_latency[t]);
                append_cells(row, betas, max_users);
                std::vector<double> xs;
                std::vector<double> ys;
                for (const auto& p : inner.positions[t]) {
                    xs.push_back(p.x);
                    ys.push_back(p.y);
                }
                append_cells(row, xs, max_antennas);
                append_cells(row, ys, max_antennas);
                trace << row << '\n';
            }
        }
    }
    close_checked(trace, trace_path);

    const auto summary_path = directory / kSummaryFileName;
    auto summary = open_for_write(summary_path);
    summary << "scheme,seed,M,N,total_latency,mean_rate_bps,runtime_seconds\n";
    for (const auto* tagged : order) {
        const auto& r = tagged->result;
        double mean_rate = 0.0;
        for (double rate : r.rates) {
            mean_rate += rate;
        }
        if (!r.rates.empty()) {
            mean_rate /= static_cast<double>(r.rates.size());
        }
        summary << tagged->scheme << ',' << tagged->seed << ',' << r.final_positions.size() << ','
                << r.final_allocation.offload_ratios.size() << ',' << format_double(r.total_latency) << ','
                << format_double(mean_rate) << ',' << format_double(include_runtime ? r.runtime_seconds : 0.0)
                << '\n';
    }
    close_checked(summary, summary_path);
}

} // namespace famec
