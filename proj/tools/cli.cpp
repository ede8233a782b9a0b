// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "famec/config_io.hpp"
#include "famec/errors.hpp"
#include "famec/export.hpp"
#include "famec/ippso_driver.hpp"
#include "famec/validation.hpp"

namespace famec::cli {

namespace {

struct CommonOptions {
    std::string config = "default";
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    std::optional<std::size_t> outer;
    std::optional<std::size_t> inner;
    std::size_t threads = 0;
    bool timing = false;
};

void add_common(CLI::App& cmd, CommonOptions& o)
{
    cmd.add_option("--config", o.config, "Config file, or 'default' for the built-in parameters");
    cmd.add_option("--seed", o.seed, "Scenario and solver seed (overrides rng_seed)");
    cmd.add_option("--out", o.out, "Output directory for trace.csv and summary.csv");
    cmd.add_option("--outer", o.outer, "Outer alternation iterations")->check(CLI::PositiveNumber);
    cmd.add_option("--inner", o.inner, "PSO iterations per outer iteration (0 disables the swarm)");
    cmd.add_option("--threads", o.threads, "Fitness evaluation threads (0 = hardware concurrency, 1 = serial)");
    cmd.add_flag("--timing", o.timing, "Record wall-clock runtimes in summary.csv");
}

ScenarioConfig resolve_config(const CommonOptions& o)
{
    ScenarioConfig config = o.config == "default" ? ScenarioConfig{} : load_config(o.config);
    if (o.seed) config.rng_seed = *o.seed;
    if (o.outer) config.outer_iterations = *o.outer;
    if (o.inner) config.pso_iterations = *o.inner;
    validate(config);
    return config;
}

TaggedResult run_scheme(const std::string& scheme, const ScenarioConfig& config, std::uint64_t seed,
                        std::size_t threads)
{
    ScenarioConfig seeded = config;
    seeded.rng_seed = seed;
    const auto scenario = sample_scenario(seeded, seed);
    const auto solver = make_ippso_config(seeded, threads);
    TaggedResult out{scheme, seed, {}};
    if (scheme == scheme::kIppso) {
        out.result = run_ippso(scenario, solver);
    } else if (scheme == scheme::kBaselineLocal) {
        out.result = run_baseline_local_only(scenario);
    } else {
        out.result = run_baseline_fixed_antenna(scenario, solver);
    }
    std::cerr << scheme << " seed=" << seed << " M=" << config.antenna_count << " N=" << config.user_count
              << " total_latency=" << format_double(out.result.total_latency) << " s\n";
    return out;
}

std::vector<std::size_t> parse_counts(const std::string& text)
{
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t used = 0;
        const auto value = std::stoul(item, &used);
        if (used != item.size() || value == 0) {
            throw CLI::ValidationError("--antennas", "expected a comma-separated list of positive integers");
        }
        out.push_back(value);
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

} // namespace

int cli_main(int argc, char** argv)
{
    CLI::App app{"Fluid-antenna MEC latency minimization: joint offloading, CPU allocation and antenna placement",
                 "famec"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    auto* run = app.add_subcommand("run", "Alternating allocation / particle-swarm optimization on one scenario");
    add_common(*run, run_opts);

    CommonOptions base_opts;
    std::string base_scheme;
    auto* base = app.add_subcommand("baseline", "Fixed-antenna baseline on one scenario");
    add_common(*base, base_opts);
    base->add_option("--scheme", base_scheme, "local: no offloading; fixed: offloading, fixed antennas")
        ->required()
        ->check(CLI::IsMember({"local", "fixed"}));

    CommonOptions sweep_opts;
    std::string sweep_antennas = "4,6,8";
    std::size_t sweep_seeds = 20;
    auto* sweep = app.add_subcommand("sweep", "All schemes over antenna counts and consecutive seeds");
    add_common(*sweep, sweep_opts);
    sweep->add_option("--antennas", sweep_antennas, "Comma-separated antenna counts");
    sweep->add_option("--seeds", sweep_seeds, "Number of seeds, starting at --seed (default 1)")
        ->check(CLI::PositiveNumber);

    std::uint64_t validate_seed = 1;
    std::size_t validate_threads = 0;
    auto* check = app.add_subcommand("validate", "Run the invariant and oracle checks");
    check->add_option("--seed", validate_seed, "Seed for the randomized checks");
    check->add_option("--threads", validate_threads, "Threads for swarm evaluation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        if (check->parsed()) {
            bool ok = true;
            for (const auto& r : validation::run_all_checks(validate_seed, validate_threads)) {
                std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << format_double(r.measured)
                          << " (limit " << format_double(r.threshold) << ", " << r.detail << ")\n";
                ok = ok && r.passed;
            }
            return ok ? kExitOk : kExitValidation;
        }

        std::vector<TaggedResult> results;
        const CommonOptions* opts = nullptr;
        if (run->parsed()) {
            opts = &run_opts;
            const auto config = resolve_config(run_opts);
            results.push_back(run_scheme(scheme::kIppso, config, config.rng_seed, run_opts.threads));
        } else if (base->parsed()) {
            opts = &base_opts;
            const auto config = resolve_config(base_opts);
            const auto* name = base_scheme == "local" ? scheme::kBaselineLocal : scheme::kBaselineFixed;
            results.push_back(run_scheme(name, config, config.rng_seed, base_opts.threads));
        } else {
            opts = &sweep_opts;
            std::vector<std::size_t> antennas;
            try {
                antennas = parse_counts(sweep_antennas);
            } catch (const std::exception& e) {
                std::cerr << "--antennas: " << e.what() << "\n" << sweep->help();
                return kExitUsage;
            }
            const auto base_config = resolve_config(sweep_opts);
            for (auto m : antennas) {
                ScenarioConfig config = base_config;
                config.antenna_count = m;
                validate(config);
                for (std::size_t i = 0; i < sweep_seeds; ++i) {
                    const auto seed = base_config.rng_seed + i;
                    for (const auto* name : {scheme::kIppso, scheme::kBaselineFixed, scheme::kBaselineLocal}) {
                        results.push_back(run_scheme(name, config, seed, sweep_opts.threads));
                    }
                }
            }
        }
        export_results(results, opts->out, opts->timing);
        std::cerr << "wrote " << (std::filesystem::path(opts->out) / kTraceFileName).string() << " and "
                  << (std::filesystem::path(opts->out) / kSummaryFileName).string() << "\n";
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

} // namespace famec::cli
