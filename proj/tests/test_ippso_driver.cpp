// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "famec/errors.hpp"
#include "famec/ippso_driver.hpp"

using namespace famec;

namespace {

IppsoConfig small_config(std::uint64_t seed)
{
    IppsoConfig c;
    c.outer_iterations = 3;
    c.swarm.particle_count = 20;
    c.swarm.max_iterations = 15;
    c.rng_seed = seed;
    return c;
}

void check_self_consistent(const ScenarioInstance& s, const RunResult& r)
{
    const auto rates = zf_rates(r.final_positions, s.channel_specs, s.wavelength, s.noise_power, s.bandwidth);
    const double t = system_total_latency(s.users, s.server, r.final_allocation, rates);
    CHECK(std::abs(t - r.total_latency) <= 1e-9 * t);
    CHECK(rates == r.rates);
    double sum = 0.0;
    for (double x : r.per_user_latencies) sum += x;
    CHECK(sum == r.total_latency);
}

} // namespace

TEST_CASE("ippso run shape and block-descent monotonicity")
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto s = sample_scenario(ScenarioConfig{}, seed);
        const auto c = small_config(seed);
        const auto r = run_ippso(s, c);
        REQUIRE(r.outer_trace.size() == 3);
        REQUIRE(r.phase_objectives.size() == 6);
        REQUIRE(r.inner_traces.size() == 3);
        REQUIRE(r.offload_trace.size() == 3);
        CHECK(r.final_positions.size() == 4);
        CHECK(r.allocation_feasible);
        for (std::size_t i = 1; i < r.phase_objectives.size(); ++i) {
            CHECK(r.phase_objectives[i] <= r.phase_objectives[i - 1] * (1.0 + 1e-6));
        }
        for (const auto& trace : r.inner_traces) {
            REQUIRE(trace.global_best_fitness.size() == 16);
            for (std::size_t t = 1; t < trace.global_best_fitness.size(); ++t) {
                CHECK(trace.global_best_fitness[t] <= trace.global_best_fitness[t - 1]);
            }
        }
        for (const auto& p : r.final_positions) {
            CHECK(std::abs(p.x) <= s.region_half_width);
            CHECK(std::abs(p.y) <= s.region_half_width);
        }
        CHECK(count_spacing_violations(r.final_positions, s.min_spacing) == 0);
        check_self_consistent(s, r);
    }
}

TEST_CASE("ippso is seeded and thread-count independent")
{
    const auto s = sample_scenario(ScenarioConfig{}, 9);
    auto c = small_config(9);
    const auto a = run_ippso(s, c);
    c.threads = 3;
    const auto b = run_ippso(s, c);
    CHECK(a.total_latency == b.total_latency);
    CHECK(a.final_positions == b.final_positions);
    CHECK(a.outer_trace == b.outer_trace);
    c.rng_seed = 10;
    CHECK(run_ippso(s, c).final_positions != a.final_positions);
}

TEST_CASE("frozen antennas with one outer round equal the fixed-antenna baseline")
{
    const auto s = sample_scenario(ScenarioConfig{}, 3);
    auto c = small_config(3);
    const auto baseline = run_baseline_fixed_antenna(s, c);
    c.outer_iterations = 1;
    c.swarm.max_iterations = 0;
    c.initial_positions = InitialPositions::Reference;
    const auto frozen = run_ippso(s, c);
    CHECK(frozen.total_latency == baseline.total_latency);
    CHECK(frozen.final_positions == baseline.final_positions);
    CHECK(frozen.final_allocation.offload_ratios == baseline.final_allocation.offload_ratios);
    CHECK(frozen.final_allocation.server_frequencies == baseline.final_allocation.server_frequencies);
    CHECK(baseline.final_positions == s.reference_positions);
    REQUIRE(baseline.inner_traces.size() == 1);
    CHECK(baseline.inner_traces[0].global_best_fitness.size() == 1);
    check_self_consistent(s, baseline);
}

TEST_CASE("local-only baseline")
{
    ScenarioConfig cfg;
    cfg.user_count = 1;
    const auto s = sample_scenario(cfg, 4);
    const auto r = run_baseline_local_only(s);
    const auto& u = s.users[0];
    CHECK(r.total_latency == local_latency(u) + upload_latency(u, r.rates[0]));
    CHECK(r.final_allocation.offload_ratios == std::vector<double>{0.0});
    check_self_consistent(s, r);

    // independent of the server budget
    auto cheap = s;
    cheap.server.max_total_frequency = 1.0;
    CHECK(run_baseline_local_only(cheap).total_latency == r.total_latency);

    // matches the optimizer when the server is useless and the antennas are frozen
    auto three = sample_scenario(ScenarioConfig{}, 5);
    three.server.max_total_frequency = 1.0;
    auto c = small_config(5);
    c.outer_iterations = 1;
    c.swarm.max_iterations = 0;
    c.initial_positions = InitialPositions::Reference;
    CHECK(run_ippso(three, c).total_latency == doctest::Approx(run_baseline_local_only(three).total_latency).epsilon(1e-12));
}

TEST_CASE("baselines and optimizer ordering on one scenario")
{
    const auto s = sample_scenario(ScenarioConfig{}, 6);
    const auto c = small_config(6);
    const double local = run_baseline_local_only(s).total_latency;
    const double fixed = run_baseline_fixed_antenna(s, c).total_latency;
    CHECK(fixed <= local);
    auto from_ref = c;
    from_ref.initial_positions = InitialPositions::Reference;
    // starting from the reference array, block descent cannot end above the baseline
    CHECK(run_ippso(s, from_ref).total_latency <= fixed * (1.0 + 1e-9));
}

TEST_CASE("threshold rounding yields binary offload decisions")
{
    const auto s = sample_scenario(ScenarioConfig{}, 8);
    auto c = small_config(8);
    c.rounding = RoundingMode::Threshold;
    const auto r = run_ippso(s, c);
    double f_sum = 0.0;
    for (std::size_t n = 0; n < r.final_allocation.offload_ratios.size(); ++n) {
        const double b = r.final_allocation.offload_ratios[n];
        CHECK((b == 0.0 || b == 1.0));
        f_sum += r.final_allocation.server_frequencies[n];
    }
    CHECK(f_sum <= s.server.max_total_frequency);
    check_self_consistent(s, r);
}

TEST_CASE("random initial layout")
{
    const auto s = sample_scenario(ScenarioConfig{}, 2);
    const auto a = random_feasible_layout(s, 1);
    CHECK(a.size() == 4);
    CHECK(count_spacing_violations(a, s.min_spacing) == 0);
    CHECK(random_feasible_layout(s, 1) == a);
    CHECK(random_feasible_layout(s, 2) != a);

    // nine antennas at spacing d0 in a 0.3 m square cannot be drawn uniformly in
    // practice; the reference array is the fallback
    ScenarioConfig crowded;
    crowded.antenna_count = 9;
    const auto big = sample_scenario(crowded, 2);
    const auto layout = random_feasible_layout(big, 1);
    CHECK(count_spacing_violations(layout, big.min_spacing) == 0);
}

TEST_CASE("invalid runs are rejected")
{
    auto s = sample_scenario(ScenarioConfig{}, 1);
    auto extra = s;
    extra.antenna_count = 2;
    CHECK_THROWS_AS(run_ippso(extra, small_config(1)), ScenarioInvalid);
    CHECK_THROWS_AS(run_baseline_local_only(extra), ScenarioInvalid);
    auto c = small_config(1);
    c.outer_iterations = 0;
    CHECK_THROWS_AS(run_ippso(s, c), ValidationError);
}

TEST_CASE("make_ippso_config carries the scenario knobs")
{
    ScenarioConfig cfg;
    cfg.pso_iterations = 7;
    cfg.particle_count = 9;
    cfg.outer_iterations = 2;
    cfg.rng_seed = 42;
    const auto c = make_ippso_config(cfg, 3);
    CHECK(c.swarm.max_iterations == 7);
    CHECK(c.swarm.particle_count == 9);
    CHECK(c.outer_iterations == 2);
    CHECK(c.rng_seed == 42);
    CHECK(c.threads == 3);
    CHECK(c.swarm.velocity_clamp == doctest::Approx(cfg.region_half_width / 2));
}
