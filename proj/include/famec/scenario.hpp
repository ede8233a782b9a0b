// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "famec/channel_model.hpp"
#include "famec/geometry.hpp"
#include "famec/latency_model.hpp"

namespace famec {

inline constexpr double kBitsPerKilobyte = 8192.0;

enum class RoundingMode { Continuous, Threshold };
enum class InitialPositions { Random, Reference };

/// Every knob of a run. Units at this boundary follow the config file
/// (KB, dB, dBm); everything downstream of sample_scenario is SI.
struct ScenarioConfig {
    std::size_t antenna_count = 4;
    std::size_t user_count = 3;
    std::size_t paths_per_user = 3;
    double wavelength = 0.1;           // m
    double region_half_width = 0.15;   // m, 1.5 lambda
    double min_spacing = 0.1;          // m, lambda
    double data_size_min_kb = 0.5;
    double data_size_max_kb = 2.0;
    double local_cpu_min_hz = 0.8e9;
    double local_cpu_max_hz = 1.0e9;
    double aoa_min = -std::numbers::pi / 2;
    double aoa_max = std::numbers::pi / 2;
    double user_distance_min = 20.0;   // m
    double user_distance_max = 100.0;  // m
    double reference_gain_db = -40.0;
    double path_loss_exponent = 2.8;
    double server_max_frequency_hz = 10e9;
    double transmit_power_dbm = 30.0;
    std::vector<double> transmit_power_dbm_per_user;  // empty: all users at transmit_power_dbm
    double noise_psd_dbm_per_hz = -174.0;
    double bandwidth_hz = 1e6;
    std::vector<double> latency_caps_s;  // empty: local-only latency at the reference array

    double model_size_factor = 0.1;
    double user_cycles_per_bit = 1000.0;
    double server_cycles_per_bit = 1000.0;
    double user_minibatch_ratio = 0.5;
    double server_minibatch_ratio = 0.5;
    double user_iterations = 10.0;
    double server_iterations = 10.0;

    std::size_t particle_count = 50;
    std::size_t pso_iterations = 50;
    double cognitive_factor = 2.0;
    double social_factor = 2.0;
    double inertia_max = 0.9;
    double inertia_min = 0.4;
    double penalty_latency = 1e3;
    double penalty_distance = 1e3;
    std::optional<double> velocity_clamp;  // unset: region_half_width / 2
    bool per_coordinate_random = false;
    std::size_t outer_iterations = 5;
    double allocation_tolerance = 1e-9;
    RoundingMode rounding = RoundingMode::Continuous;
    double rounding_threshold = 0.5;
    InitialPositions initial_positions = InitialPositions::Random;
    std::uint64_t rng_seed = 1;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ValidationError naming the first violated invariant.
void validate(const ScenarioConfig& config);

/// One stochastic draw of users and channels, in SI units.
struct ScenarioInstance {
    std::size_t antenna_count = 0;
    std::vector<UserProfile> users;
    std::vector<UserChannelSpec> channel_specs;
    ServerProfile server;
    double wavelength = 0.1;
    double region_half_width = 0.15;
    double min_spacing = 0.1;
    double bandwidth = 1e6;
    double noise_power = 0.0;  // W
    std::vector<PlanarPosition> reference_positions;
    std::vector<double> latency_caps;

    std::size_t user_count() const { return users.size(); }
};

double dbm_to_watts(double value_dbm);
double watts_to_dbm(double watts);
double db_to_linear(double value_db);

/// Draws AoAs, distances, path gains, data sizes and local CPU speeds.
/// User n's draw depends only on (seed, n), not on N or M.
ScenarioInstance sample_scenario(const ScenarioConfig& config, std::uint64_t seed);

} // namespace famec
