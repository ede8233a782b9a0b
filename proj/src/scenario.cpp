// SPDX-License-Identifier: Apache-2.0
#include "famec/scenario.hpp"

#include <cmath>
#include <random>
#include <string>

#include "famec/convex_alloc.hpp"
#include "famec/errors.hpp"
#include "famec/random.hpp"

namespace famec {

namespace {

void require(bool ok, const std::string& invariant)
{
    if (!ok) {
        throw ValidationError("invalid config: " + invariant);
    }
}

void require_range(double lo, double hi, const std::string& name)
{
    require(lo > 0.0 && lo <= hi, name + " range must satisfy 0 < min <= max");
}

} // namespace

void validate(const ScenarioConfig& c)
{
    require(c.antenna_count >= 1, "antenna_count >= 1");
    require(c.user_count >= 1, "user_count >= 1");
    require(c.user_count <= c.antenna_count, "user_count <= antenna_count (N <= M)");
    require(c.paths_per_user >= 1, "paths_per_user >= 1");
    require(c.wavelength > 0.0, "wavelength > 0");
    require(c.region_half_width > 0.0, "region_half_width > 0");
    require(c.min_spacing > 0.0, "min_spacing > 0");
    require(c.min_spacing <= 2.0 * c.region_half_width, "min_spacing <= 2 * region_half_width");
    require_range(c.data_size_min_kb, c.data_size_max_kb, "data_size_kb");
    require_range(c.local_cpu_min_hz, c.local_cpu_max_hz, "local_cpu_hz");
    require(c.aoa_min <= c.aoa_max, "aoa_min <= aoa_max");
    require_range(c.user_distance_min, c.user_distance_max, "user_distance");
    require(std::isfinite(c.reference_gain_db), "reference_gain_db finite");
    require(c.path_loss_exponent > 0.0, "path_loss_exponent > 0");
    require(c.server_max_frequency_hz > 0.0, "server_max_frequency_hz > 0");
    require(std::isfinite(c.transmit_power_dbm), "transmit_power_dbm finite");
    require(c.transmit_power_dbm_per_user.empty() || c.transmit_power_dbm_per_user.size() == c.user_count,
            "transmit_power_dbm_per_user has one entry per user");
    require(std::isfinite(c.noise_psd_dbm_per_hz), "noise_psd_dbm_per_hz finite");
    require(c.bandwidth_hz > 0.0, "bandwidth_hz > 0");
    require(c.latency_caps_s.empty() || c.latency_caps_s.size() == c.user_count,
            "latency_caps_s has one entry per user");
    for (double cap : c.latency_caps_s) {
        require(cap > 0.0, "latency_caps_s entries > 0");
    }
    require(c.model_size_factor > 0.0, "model_size_factor > 0");
    require(c.user_cycles_per_bit > 0.0 && c.server_cycles_per_bit > 0.0, "cycles_per_bit > 0");
    require(c.user_minibatch_ratio > 0.0 && c.user_minibatch_ratio <= 1.0, "0 < user_minibatch_ratio <= 1");
    require(c.server_minibatch_ratio > 0.0 && c.server_minibatch_ratio <= 1.0, "0 < server_minibatch_ratio <= 1");
    require(c.user_iterations > 0.0 && c.server_iterations > 0.0, "iterations > 0");
    require(c.particle_count >= 2, "particle_count >= 2");
    require(c.cognitive_factor >= 0.0 && c.social_factor >= 0.0, "learning factors >= 0");
    require(c.inertia_min > 0.0 && c.inertia_max >= c.inertia_min, "inertia_max >= inertia_min > 0");
    require(c.penalty_latency > 0.0 && c.penalty_distance > 0.0, "penalty coefficients > 0");
    require(!c.velocity_clamp || *c.velocity_clamp > 0.0, "velocity_clamp > 0");
    require(c.outer_iterations >= 1, "outer_iterations >= 1");
    require(c.allocation_tolerance > 0.0, "allocation_tolerance > 0");
    require(c.rounding_threshold > 0.0 && c.rounding_threshold < 1.0, "0 < rounding_threshold < 1");
    try {
        (void)reference_array(c.antenna_count, c.min_spacing, c.region_half_width);
    } catch (const ScenarioInvalid& e) {
        throw ValidationError(std::string("invalid config: ") + e.what());
    }
}

double dbm_to_watts(double value_dbm)
{
    return std::pow(10.0, (value_dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts)
{
    return 10.0 * std::log10(watts) + 30.0;
}

double db_to_linear(double value_db)
{
    return std::pow(10.0, value_db / 10.0);
}

ScenarioInstance sample_scenario(const ScenarioConfig& config, std::uint64_t seed)
{
    validate(config);
    ScenarioInstance s;
    s.antenna_count = config.antenna_count;
    s.wavelength = config.wavelength;
    s.region_half_width = config.region_half_width;
    s.min_spacing = config.min_spacing;
    s.bandwidth = config.bandwidth_hz;
    s.noise_power = dbm_to_watts(config.noise_psd_dbm_per_hz) * config.bandwidth_hz;
    s.server = ServerProfile{config.server_cycles_per_bit, config.server_minibatch_ratio, config.server_iterations,
                             config.server_max_frequency_hz};

    const double rho = db_to_linear(config.reference_gain_db);
    const auto paths = config.paths_per_user;
    for (std::size_t n = 0; n < config.user_count; ++n) {
        auto rng = substream(seed, stream::kScenario, n);
        std::uniform_real_distribution<double> data_kb(config.data_size_min_kb, config.data_size_max_kb);
        std::uniform_real_distribution<double> cpu(config.local_cpu_min_hz, config.local_cpu_max_hz);
        std::uniform_real_distribution<double> dist(config.user_distance_min, config.user_distance_max);
        std::uniform_real_distribution<double> aoa(config.aoa_min, config.aoa_max);

        UserProfile user;
        user.cycles_per_bit = config.user_cycles_per_bit;
        user.data_size = data_kb(rng) * kBitsPerKilobyte;
        user.minibatch_ratio = config.user_minibatch_ratio;
        user.local_iterations = config.user_iterations;
        user.local_cpu_frequency = cpu(rng);
        user.model_size_factor = config.model_size_factor;

        UserChannelSpec ch;
        ch.distance_to_bs = dist(rng);
        ch.transmit_power = dbm_to_watts(config.transmit_power_dbm_per_user.empty()
                                             ? config.transmit_power_dbm
                                             : config.transmit_power_dbm_per_user[n]);
        ch.elevation_aoas.resize(paths);
        ch.azimuth_aoas.resize(paths);
        for (std::size_t l = 0; l < paths; ++l) {
            ch.elevation_aoas[l] = aoa(rng);
            ch.azimuth_aoas[l] = aoa(rng);
        }
        // CN(0, rho X^-alpha / L): each real component carries half the variance.
        const double variance = rho * std::pow(ch.distance_to_bs, -config.path_loss_exponent) / static_cast<double>(paths);
        std::normal_distribution<double> component(0.0, std::sqrt(variance / 2.0));
        ch.path_gains.resize(paths);
        for (auto& g : ch.path_gains) {
            const double re = component(rng);
            const double im = component(rng);
            g = {re, im};
        }
        s.users.push_back(user);
        s.channel_specs.push_back(std::move(ch));
    }

    s.reference_positions = reference_array(config.antenna_count, config.min_spacing, config.region_half_width);
    if (!config.latency_caps_s.empty()) {
        s.latency_caps = config.latency_caps_s;
    } else {
        try {
            const auto rates = zf_rates(s.reference_positions, s.channel_specs, s.wavelength, s.noise_power, s.bandwidth);
            s.latency_caps = local_only_latencies(s.users, rates);
        } catch (const RankDeficientChannel& e) {
            throw ScenarioInvalid(std::string("reference array cannot separate users: ") + e.what());
        }
    }
    return s;
}

} // namespace famec
