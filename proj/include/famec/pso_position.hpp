// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "famec/channel_model.hpp"
#include "famec/geometry.hpp"
#include "famec/latency_model.hpp"
#include "famec/random.hpp"

namespace famec {

struct SwarmConfig {
    std::size_t particle_count = 50;
    std::size_t max_iterations = 50;
    double cognitive_factor = 2.0;
    double social_factor = 2.0;
    double inertia_max = 0.9;
    double inertia_min = 0.4;
    double penalty_latency = 1e3;   // 1/s^2
    double penalty_distance = 1e3;
    double region_half_width = 0.15;  // A, m
    double min_spacing = 0.1;         // d0, m
    double velocity_clamp = 0.075;    // m per iteration
    // Draw r1, r2 per coordinate instead of once per particle and iteration.
    bool per_coordinate_random = false;
};

void validate(const SwarmConfig& config);

/// A candidate antenna layout, coordinates interleaved as x_1, y_1, ..., x_M, y_M.
struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> personal_best_position;
    double personal_best_fitness = std::numeric_limits<double>::infinity();
};

struct SwarmState {
    std::vector<Particle> particles;
    std::vector<double> global_best_position;
    double global_best_fitness = std::numeric_limits<double>::infinity();
    std::size_t iteration = 0;
};

/// Fitness of a coordinate vector. The second argument is the swarm's global
/// best so far (infinity before the first evaluation).
using FitnessFunction = std::function<double(std::span<const double>, double)>;

/// Uniform placement on [-A, A]^{2M} with zero velocity, evaluated once.
/// A non-empty `incumbent` replaces particle 0's position.
SwarmState init_swarm(const SwarmConfig& config, std::size_t antenna_count, std::uint64_t seed,
                      const FitnessFunction& fitness, std::span<const double> incumbent = {},
                      std::size_t threads = 1);

/// w_max - (w_max - w_min) t / T.
double inertia_weight(const SwarmConfig& config, std::size_t t, std::size_t total_iterations);

/// Attraction draws r1 (cognitive) and r2 (social). Either one value applied
/// to every coordinate, or one value per coordinate.
struct AttractionDraws {
    std::vector<double> cognitive;
    std::vector<double> social;
};

AttractionDraws draw_attractions(const SwarmConfig& config, std::size_t dimension, RandomEngine& rng);

/// Standard PSO velocity/position step, followed by velocity and boundary clamping.
/// Personal bests are left untouched.
Particle update_particle(Particle particle, std::span<const double> global_best, double inertia,
                         const SwarmConfig& config, const AttractionDraws& draws);
Particle update_particle(Particle particle, std::span<const double> global_best, double inertia,
                         const SwarmConfig& config, RandomEngine& rng);

std::vector<double> clamp_positions(std::vector<double> coords, double half_width);

/// tau1 * sum over users above their cap of the squared excess, plus tau2 times
/// the number of antenna pairs closer than d0. Distances equal to d0 and
/// latencies equal to their cap are not violations.
double penalty(std::span<const PlanarPosition> positions, std::span<const double> per_user_latencies,
               std::span<const double> latency_caps, const SwarmConfig& config);

/// Everything fitness() needs besides the candidate positions; the allocation stays fixed.
struct EvaluationContext {
    std::vector<UserProfile> users;
    ServerProfile server;
    std::vector<UserChannelSpec> channels;
    AllocationState allocation;
    std::vector<double> latency_caps;
    double wavelength = 0.1;
    double noise_power = 0.0;
    double bandwidth = 1e6;
};

/// Multiplier applied to the current global best for layouts where ZF is undefined.
inline constexpr double kSentinelFactor = 1e6;

double rank_deficient_sentinel(double current_best);

/// Total latency plus penalty at the candidate layout, or the sentinel when the
/// layout makes users inseparable.
double fitness(std::span<const double> coords, const EvaluationContext& context, const SwarmConfig& config,
               double current_best = std::numeric_limits<double>::infinity());

struct PsoResult {
    std::vector<double> best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    // Entry 0 is the initialized swarm, entry t the state after iteration t.
    std::vector<double> fitness_trace;
    std::vector<std::vector<double>> best_position_trace;
};

/// Runs max_iterations PSO iterations. Particle updates use substreams keyed
/// by (seed, particle, iteration), so the result does not depend on `threads`.
PsoResult run_pso(const SwarmConfig& config, std::size_t antenna_count, const FitnessFunction& fitness,
                  std::uint64_t seed, std::span<const double> incumbent = {}, std::size_t threads = 1);

PsoResult run_pso(const SwarmConfig& config, const EvaluationContext& context, std::size_t antenna_count,
                  std::uint64_t seed, std::span<const double> incumbent = {}, std::size_t threads = 1);

} // namespace famec
