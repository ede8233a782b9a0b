// SPDX-License-Identifier: Apache-2.0
#include "famec/ippso_driver.hpp"

#include <chrono>
#include <random>
#include <string>

#include "famec/errors.hpp"
#include "famec/random.hpp"

namespace famec {

namespace {

EvaluationContext make_context(const ScenarioInstance& s, const AllocationState& allocation)
{
    return EvaluationContext{s.users,      s.server,          s.channel_specs, allocation, s.latency_caps,
                             s.wavelength, s.noise_power, s.bandwidth};
}

std::vector<double> rates_at(const ScenarioInstance& s, const std::vector<PlanarPosition>& positions)
{
    return zf_rates(positions, s.channel_specs, s.wavelength, s.noise_power, s.bandwidth);
}

InnerTrace frozen_trace(const ScenarioInstance& s, const SwarmConfig& swarm, const AllocationState& allocation,
                        const std::vector<PlanarPosition>& positions)
{
    const auto context = make_context(s, allocation);
    const auto coords = flatten(positions);
    InnerTrace trace;
    trace.global_best_fitness.push_back(fitness(coords, context, swarm));
    trace.total_latency.push_back(system_total_latency(s.users, s.server, allocation, rates_at(s, positions)));
    trace.positions.push_back(positions);
    return trace;
}

void finish(RunResult& r, const ScenarioInstance& s)
{
    r.rates = rates_at(s, r.final_positions);
    r.per_user_latencies = per_user_latencies(s.users, s.server, r.final_allocation, r.rates);
    r.total_latency = 0.0;
    for (double t : r.per_user_latencies) {
        r.total_latency += t;
    }
}

void check_dimensions(const ScenarioInstance& s)
{
    if (s.user_count() > s.antenna_count) {
        throw ScenarioInvalid("N = " + std::to_string(s.user_count()) + " users exceed M = "
                              + std::to_string(s.antenna_count) + " antennas");
    }
    if (s.user_count() == 0) {
        throw ScenarioInvalid("scenario has no users");
    }
}

} // namespace

IppsoConfig make_ippso_config(const ScenarioConfig& c, std::size_t threads)
{
    IppsoConfig out;
    out.outer_iterations = c.outer_iterations;
    out.swarm.particle_count = c.particle_count;
    out.swarm.max_iterations = c.pso_iterations;
    out.swarm.cognitive_factor = c.cognitive_factor;
    out.swarm.social_factor = c.social_factor;
    out.swarm.inertia_max = c.inertia_max;
    out.swarm.inertia_min = c.inertia_min;
    out.swarm.penalty_latency = c.penalty_latency;
    out.swarm.penalty_distance = c.penalty_distance;
    out.swarm.region_half_width = c.region_half_width;
    out.swarm.min_spacing = c.min_spacing;
    out.swarm.velocity_clamp = c.velocity_clamp.value_or(c.region_half_width / 2.0);
    out.swarm.per_coordinate_random = c.per_coordinate_random;
    out.allocation_tolerance = c.allocation_tolerance;
    out.rounding = c.rounding;
    out.rounding_threshold = c.rounding_threshold;
    out.initial_positions = c.initial_positions;
    out.rng_seed = c.rng_seed;
    out.threads = threads;
    return out;
}

std::vector<PlanarPosition> random_feasible_layout(const ScenarioInstance& s, std::uint64_t seed)
{
    auto rng = substream(seed, stream::kAntennaInit);
    std::uniform_real_distribution<double> coord(-s.region_half_width, s.region_half_width);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<PlanarPosition> layout(s.antenna_count);
        for (auto& p : layout) {
            p.x = coord(rng);
            p.y = coord(rng);
        }
        if (count_spacing_violations(layout, s.min_spacing) != 0) {
            continue;
        }
        try {
            (void)zf_combining_matrix(channel_matrix(layout, s.channel_specs, s.wavelength));
        } catch (const RankDeficientChannel&) {
            continue;
        }
        return layout;
    }
    return s.reference_positions;
}

RunResult run_ippso(const ScenarioInstance& s, const IppsoConfig& config)
{
    check_dimensions(s);
    validate(config.swarm);
    if (config.outer_iterations < 1) {
        throw ValidationError("IppsoConfig: outer_iterations must be >= 1");
    }
    const auto started = std::chrono::steady_clock::now();

    RunResult r;
    auto positions = config.initial_positions == InitialPositions::Reference
                         ? s.reference_positions
                         : random_feasible_layout(s, config.rng_seed);
    AllocationProblem problem{s.users, s.server, {}, s.latency_caps};
    AllocationState allocation = AllocationState::local_only(s.user_count());

    for (std::size_t k = 1; k <= config.outer_iterations; ++k) {
        problem.rates = rates_at(s, positions);
        const auto solution = solve_allocation(problem, config.allocation_tolerance);
        allocation = solution.allocation;
        r.allocation_feasible = r.allocation_feasible && solution.feasible;
        r.phase_objectives.push_back(solution.objective);
        r.offload_trace.push_back(allocation.offload_ratios);

        if (config.swarm.max_iterations > 0) {
            const auto context = make_context(s, allocation);
            const auto pso_seed = substream(config.rng_seed, stream::kSwarmInit, k, 0xA5)();
            const auto pso = run_pso(config.swarm, context, s.antenna_count, pso_seed, flatten(positions),
                                     config.threads);
            positions = unflatten(pso.best_position);
            InnerTrace trace;
            trace.global_best_fitness = pso.fitness_trace;
            for (const auto& coords : pso.best_position_trace) {
                auto layout = unflatten(coords);
                trace.total_latency.push_back(system_total_latency(s.users, s.server, allocation, rates_at(s, layout)));
                trace.positions.push_back(std::move(layout));
            }
            r.inner_traces.push_back(std::move(trace));
        } else {
            r.inner_traces.push_back(frozen_trace(s, config.swarm, allocation, positions));
        }
        const double objective = r.inner_traces.back().total_latency.back();
        r.phase_objectives.push_back(objective);
        r.outer_trace.push_back(objective);
    }

    if (config.rounding == RoundingMode::Threshold) {
        problem.rates = rates_at(s, positions);
        allocation = threshold_round(problem, allocation, config.rounding_threshold);
    }
    r.final_positions = std::move(positions);
    r.final_allocation = std::move(allocation);
    finish(r, s);
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
}

RunResult run_baseline_local_only(const ScenarioInstance& s)
{
    check_dimensions(s);
    const auto started = std::chrono::steady_clock::now();
    RunResult r;
    r.final_positions = s.reference_positions;
    r.final_allocation = AllocationState::local_only(s.user_count());
    finish(r, s);
    SwarmConfig swarm;
    swarm.region_half_width = s.region_half_width;
    swarm.min_spacing = s.min_spacing;
    r.inner_traces.push_back(frozen_trace(s, swarm, r.final_allocation, r.final_positions));
    r.outer_trace = {r.total_latency};
    r.phase_objectives = {r.total_latency, r.total_latency};
    r.offload_trace = {r.final_allocation.offload_ratios};
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
}

RunResult run_baseline_fixed_antenna(const ScenarioInstance& s, const IppsoConfig& config)
{
    IppsoConfig fixed = config;
    fixed.outer_iterations = 1;
    fixed.swarm.max_iterations = 0;
    fixed.initial_positions = InitialPositions::Reference;
    return run_ippso(s, fixed);
}

} // namespace famec
