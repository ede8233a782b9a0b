// SPDX-License-Identifier: Apache-2.0
#include "famec/pso_position.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "famec/errors.hpp"
#include "famec/parallel.hpp"

namespace famec {

void validate(const SwarmConfig& c)
{
    auto fail = [](const std::string& what) { throw ValidationError("SwarmConfig: " + what); };
    if (c.particle_count < 2) fail("particle_count must be >= 2");
    if (!(c.cognitive_factor >= 0.0) || !(c.social_factor >= 0.0)) fail("learning factors must be >= 0");
    if (!(c.inertia_min > 0.0) || !(c.inertia_max >= c.inertia_min)) fail("need inertia_max >= inertia_min > 0");
    if (!(c.region_half_width > 0.0)) fail("region_half_width must be positive");
    if (!(c.min_spacing > 0.0)) fail("min_spacing must be positive");
    if (!(c.penalty_latency > 0.0) || !(c.penalty_distance > 0.0)) fail("penalty coefficients must be positive");
    if (!(c.velocity_clamp > 0.0)) fail("velocity_clamp must be positive");
}

namespace {

// Evaluates every particle's current position and folds the results into the
// personal and global bests in particle order.
void evaluate_and_reduce(SwarmState& swarm, const FitnessFunction& fitness, std::size_t threads)
{
    const double current_best = swarm.global_best_fitness;
    std::vector<double> values(swarm.particles.size());
    parallel_for(swarm.particles.size(), threads,
                 [&](std::size_t i) { values[i] = fitness(swarm.particles[i].position, current_best); });
    for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
        auto& p = swarm.particles[i];
        if (values[i] < p.personal_best_fitness) {
            p.personal_best_fitness = values[i];
            p.personal_best_position = p.position;
        }
        if (values[i] < swarm.global_best_fitness) {
            swarm.global_best_fitness = values[i];
            swarm.global_best_position = p.position;
        }
    }
}

} // namespace

SwarmState init_swarm(const SwarmConfig& config, std::size_t antenna_count, std::uint64_t seed,
                      const FitnessFunction& fitness, std::span<const double> incumbent, std::size_t threads)
{
    validate(config);
    if (antenna_count == 0) {
        throw ValidationError("init_swarm: antenna_count must be >= 1");
    }
    const auto dim = 2 * antenna_count;
    if (!incumbent.empty() && incumbent.size() != dim) {
        throw ValidationError("init_swarm: incumbent has " + std::to_string(incumbent.size())
                              + " coordinates, expected " + std::to_string(dim));
    }
    const double a = config.region_half_width;
    SwarmState swarm;
    swarm.particles.resize(config.particle_count);
    for (std::size_t i = 0; i < config.particle_count; ++i) {
        auto rng = substream(seed, stream::kSwarmInit, i);
        std::uniform_real_distribution<double> coord(-a, a);
        auto& p = swarm.particles[i];
        p.position.resize(dim);
        for (auto& x : p.position) {
            x = coord(rng);
        }
        p.velocity.assign(dim, 0.0);
    }
    if (!incumbent.empty()) {
        swarm.particles[0].position = clamp_positions({incumbent.begin(), incumbent.end()}, a);
    }
    evaluate_and_reduce(swarm, fitness, threads);
    return swarm;
}

double inertia_weight(const SwarmConfig& config, std::size_t t, std::size_t total_iterations)
{
    if (total_iterations == 0) {
        return config.inertia_max;
    }
    return config.inertia_max
           - (config.inertia_max - config.inertia_min) * static_cast<double>(t) / static_cast<double>(total_iterations);
}

AttractionDraws draw_attractions(const SwarmConfig& config, std::size_t dimension, RandomEngine& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto count = config.per_coordinate_random ? dimension : std::size_t{1};
    AttractionDraws d;
    d.cognitive.resize(count);
    d.social.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        d.cognitive[j] = unit(rng);
        d.social[j] = unit(rng);
    }
    return d;
}

Particle update_particle(Particle particle, std::span<const double> global_best, double inertia,
                         const SwarmConfig& config, const AttractionDraws& draws)
{
    const auto dim = particle.position.size();
    auto pick = [](const std::vector<double>& r, std::size_t j) { return r.size() == 1 ? r[0] : r[j]; };
    for (std::size_t j = 0; j < dim; ++j) {
        const double x = particle.position[j];
        double v = inertia * particle.velocity[j]
                   + config.cognitive_factor * pick(draws.cognitive, j) * (particle.personal_best_position[j] - x)
                   + config.social_factor * pick(draws.social, j) * (global_best[j] - x);
        v = std::clamp(v, -config.velocity_clamp, config.velocity_clamp);
        particle.velocity[j] = v;
        particle.position[j] = x + v;
    }
    particle.position = clamp_positions(std::move(particle.position), config.region_half_width);
    return particle;
}

Particle update_particle(Particle particle, std::span<const double> global_best, double inertia,
                         const SwarmConfig& config, RandomEngine& rng)
{
    const auto draws = draw_attractions(config, particle.position.size(), rng);
    return update_particle(std::move(particle), global_best, inertia, config, draws);
}

std::vector<double> clamp_positions(std::vector<double> coords, double half_width)
{
    for (auto& x : coords) {
        x = std::max(std::min(x, half_width), -half_width);
    }
    return coords;
}

double penalty(std::span<const PlanarPosition> positions, std::span<const double> per_user_latencies,
               std::span<const double> latency_caps, const SwarmConfig& config)
{
    if (per_user_latencies.size() != latency_caps.size()) {
        throw ValidationError("penalty: latencies and caps must have the same length");
    }
    double excess = 0.0;
    for (std::size_t n = 0; n < per_user_latencies.size(); ++n) {
        if (per_user_latencies[n] > latency_caps[n]) {
            const double e = per_user_latencies[n] - latency_caps[n];
            excess += e * e;
        }
    }
    const auto close_pairs = count_spacing_violations(positions, config.min_spacing);
    return config.penalty_latency * excess + config.penalty_distance * static_cast<double>(close_pairs);
}

double rank_deficient_sentinel(double current_best)
{
    return std::isfinite(current_best) && current_best > 0.0 ? kSentinelFactor * current_best : kSentinelFactor;
}

double fitness(std::span<const double> coords, const EvaluationContext& context, const SwarmConfig& config,
               double current_best)
{
    const auto positions = unflatten(coords);
    std::vector<double> rates;
    try {
        rates = zf_rates(positions, context.channels, context.wavelength, context.noise_power, context.bandwidth);
        const auto latencies = per_user_latencies(context.users, context.server, context.allocation, rates);
        double total = 0.0;
        for (double t : latencies) {
            total += t;
        }
        return total + penalty(positions, latencies, context.latency_caps, config);
    } catch (const RankDeficientChannel&) {
        return rank_deficient_sentinel(current_best);
    } catch (const ZeroRate&) {
        return rank_deficient_sentinel(current_best);
    }
}

PsoResult run_pso(const SwarmConfig& config, std::size_t antenna_count, const FitnessFunction& fitness_fn,
                  std::uint64_t seed, std::span<const double> incumbent, std::size_t threads)
{
    auto swarm = init_swarm(config, antenna_count, seed, fitness_fn, incumbent, threads);
    PsoResult out;
    out.fitness_trace.push_back(swarm.global_best_fitness);
    out.best_position_trace.push_back(swarm.global_best_position);

    const auto total = config.max_iterations;
    for (std::size_t t = 1; t <= total; ++t) {
        const double w = inertia_weight(config, t, total);
        const auto global_best = swarm.global_best_position;
        for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
            auto rng = substream(seed, stream::kSwarmUpdate, i, t);
            swarm.particles[i] = update_particle(std::move(swarm.particles[i]), global_best, w, config, rng);
        }
        evaluate_and_reduce(swarm, fitness_fn, threads);
        swarm.iteration = t;
        out.fitness_trace.push_back(swarm.global_best_fitness);
        out.best_position_trace.push_back(swarm.global_best_position);
    }
    out.best_position = swarm.global_best_position;
    out.best_fitness = swarm.global_best_fitness;
    return out;
}

PsoResult run_pso(const SwarmConfig& config, const EvaluationContext& context, std::size_t antenna_count,
                  std::uint64_t seed, std::span<const double> incumbent, std::size_t threads)
{
    const FitnessFunction fn = [&](std::span<const double> coords, double best) {
        return fitness(coords, context, config, best);
    };
    return run_pso(config, antenna_count, fn, seed, incumbent, threads);
}

} // namespace famec
