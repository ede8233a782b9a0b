// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "famec/convex_alloc.hpp"
#include "famec/pso_position.hpp"
#include "famec/scenario.hpp"

namespace famec {

struct IppsoConfig {
    std::size_t outer_iterations = 5;
    SwarmConfig swarm;
    double allocation_tolerance = 1e-9;
    RoundingMode rounding = RoundingMode::Continuous;
    double rounding_threshold = 0.5;
    InitialPositions initial_positions = InitialPositions::Random;
    std::uint64_t rng_seed = 1;
    std::size_t threads = 1;  // 0: one per hardware thread
};

/// Solver settings carried by a scenario config, for a given thread count.
IppsoConfig make_ippso_config(const ScenarioConfig& config, std::size_t threads = 1);

/// Antenna search progress within one outer iteration. Single entry when the
/// antennas were not optimized.
struct InnerTrace {
    std::vector<double> global_best_fitness;
    std::vector<double> total_latency;  // at the global best, without penalty
    std::vector<std::vector<PlanarPosition>> positions;
};

struct RunResult {
    std::vector<PlanarPosition> final_positions;
    AllocationState final_allocation;
    double total_latency = 0.0;
    std::vector<double> per_user_latencies;
    std::vector<double> rates;
    // Objective after each complete outer iteration.
    std::vector<double> outer_trace;
    // Objective after every phase: allocation then antennas, per outer iteration.
    std::vector<double> phase_objectives;
    // Offload ratios after each outer iteration's allocation phase.
    std::vector<std::vector<double>> offload_trace;
    std::vector<InnerTrace> inner_traces;
    bool allocation_feasible = true;
    double runtime_seconds = 0.0;
};

/// Alternates the allocation solve (antennas fixed) with the particle swarm
/// (allocation fixed) for outer_iterations rounds, allocation first. The swarm
/// is seeded with the current layout, so neither phase can increase the
/// objective. Throws ScenarioInvalid when N > M.
RunResult run_ippso(const ScenarioInstance& scenario, const IppsoConfig& config);

/// Baseline 1: everything computed locally, antennas at the reference array.
RunResult run_baseline_local_only(const ScenarioInstance& scenario);

/// Baseline 2: antennas at the reference array, allocation solved once.
RunResult run_baseline_fixed_antenna(const ScenarioInstance& scenario, const IppsoConfig& config);

/// Uniform layout over the region that respects the minimum spacing and
/// separates the users; falls back to the reference array after 10000 draws.
std::vector<PlanarPosition> random_feasible_layout(const ScenarioInstance& scenario, std::uint64_t seed);

} // namespace famec
