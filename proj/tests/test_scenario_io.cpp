// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "famec/config_io.hpp"
#include "famec/errors.hpp"
#include "famec/export.hpp"
#include "famec/ippso_driver.hpp"
#include "famec/scenario.hpp"

using namespace famec;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("famec_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t line_count(const std::string& text)
{
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

} // namespace

TEST_CASE("unit conversions")
{
    CHECK(dbm_to_watts(30.0) == 1.0);
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(dbm_to_watts(-174.0) * 1e6 == doctest::Approx(3.981071705534986e-15).epsilon(1e-12));
    CHECK(db_to_linear(-40.0) == doctest::Approx(1e-4).epsilon(1e-15));
    for (double dbm : {-174.0, -30.0, 0.0, 13.7, 30.0, 46.0}) {
        CHECK(std::abs(watts_to_dbm(dbm_to_watts(dbm)) - dbm) <= 1e-12 * std::max(1.0, std::abs(dbm)));
    }
}

TEST_CASE("default config carries the table values")
{
    const ScenarioConfig c;
    CHECK(c.antenna_count == 4);
    CHECK(c.user_count == 3);
    CHECK(c.paths_per_user == 3);
    CHECK(c.wavelength == 0.1);
    CHECK(c.region_half_width == doctest::Approx(1.5 * c.wavelength));
    CHECK(c.min_spacing == c.wavelength);
    CHECK(c.data_size_min_kb == 0.5);
    CHECK(c.data_size_max_kb == 2.0);
    CHECK(c.local_cpu_min_hz == 0.8e9);
    CHECK(c.local_cpu_max_hz == 1.0e9);
    CHECK(c.aoa_min == -std::numbers::pi / 2);
    CHECK(c.aoa_max == std::numbers::pi / 2);
    CHECK(c.user_distance_min == 20.0);
    CHECK(c.user_distance_max == 100.0);
    CHECK(c.reference_gain_db == -40.0);
    CHECK(c.path_loss_exponent == 2.8);
    CHECK(c.server_max_frequency_hz == 10e9);
    CHECK(c.transmit_power_dbm == 30.0);
    CHECK(c.noise_psd_dbm_per_hz == -174.0);
}

TEST_CASE("scenario sampling")
{
    ScenarioConfig cfg;
    const auto a = sample_scenario(cfg, 21);
    const auto b = sample_scenario(cfg, 21);
    REQUIRE(a.users.size() == 3);
    CHECK(a.channel_specs[1].path_gains == b.channel_specs[1].path_gains);
    CHECK(a.users[2].data_size == b.users[2].data_size);
    CHECK(a.latency_caps == b.latency_caps);
    CHECK(sample_scenario(cfg, 22).users[0].data_size != a.users[0].data_size);
    CHECK(a.noise_power == doctest::Approx(3.981071705534986e-15).epsilon(1e-12));
    CHECK(a.server.max_total_frequency == 10e9);
    for (const auto& ch : a.channel_specs) CHECK(ch.transmit_power == 1.0);

    // user n's draw does not depend on how many users or antennas there are
    ScenarioConfig wide = cfg;
    wide.antenna_count = 8;
    wide.user_count = 6;
    const auto w = sample_scenario(wide, 21);
    CHECK(w.channel_specs[2].path_gains == a.channel_specs[2].path_gains);
    CHECK(w.users[1].local_cpu_frequency == a.users[1].local_cpu_frequency);

    // default caps are the local-only latency at the reference array
    const auto rates = zf_rates(a.reference_positions, a.channel_specs, a.wavelength, a.noise_power, a.bandwidth);
    for (std::size_t n = 0; n < 3; ++n) {
        CHECK(a.latency_caps[n] == local_latency(a.users[n]) + upload_latency(a.users[n], rates[n]));
    }
    ScenarioConfig capped = cfg;
    capped.latency_caps_s = {0.1, 0.2, 0.3};
    CHECK(sample_scenario(capped, 21).latency_caps == capped.latency_caps_s);
    ScenarioConfig powered = cfg;
    powered.transmit_power_dbm_per_user = {30.0, 20.0, 10.0};
    CHECK(sample_scenario(powered, 21).channel_specs[2].transmit_power == doctest::Approx(0.01));
}

TEST_CASE("sampled values stay inside their ranges")
{
    ScenarioConfig cfg;
    cfg.antenna_count = 9;
    cfg.user_count = 9;
    cfg.latency_caps_s.assign(9, 1.0);  // skip the rate computation
    const double half_pi = std::numbers::pi / 2;
    std::size_t users = 0;
    for (std::uint64_t seed = 0; users < 10000; ++seed) {
        const auto s = sample_scenario(cfg, seed);
        for (std::size_t n = 0; n < 9; ++n, ++users) {
            const auto& u = s.users[n];
            const auto& ch = s.channel_specs[n];
            CHECK(u.data_size >= 0.5 * 8192);
            CHECK(u.data_size <= 2.0 * 8192);
            CHECK(u.local_cpu_frequency >= 0.8e9);
            CHECK(u.local_cpu_frequency <= 1.0e9);
            CHECK(ch.distance_to_bs >= 20.0);
            CHECK(ch.distance_to_bs <= 100.0);
            for (std::size_t l = 0; l < 3; ++l) {
                CHECK(std::abs(ch.elevation_aoas[l]) <= half_pi);
                CHECK(std::abs(ch.azimuth_aoas[l]) <= half_pi);
            }
        }
    }
}

TEST_CASE("path gain variance matches the path-loss model")
{
    ScenarioConfig cfg;
    cfg.antenna_count = 10;
    cfg.user_count = 10;
    cfg.user_distance_min = 50.0;
    cfg.user_distance_max = 50.0;
    cfg.latency_caps_s.assign(10, 1.0);
    const double expected = 1e-4 * std::pow(50.0, -2.8) / 3.0;
    CHECK(expected == doctest::Approx(5.831264394364155e-10).epsilon(1e-12));

    std::vector<double> power;
    for (std::uint64_t seed = 0; power.size() < 100000; ++seed) {
        const auto s = sample_scenario(cfg, seed);
        for (const auto& ch : s.channel_specs) {
            for (const auto& g : ch.path_gains) power.push_back(std::norm(g));
        }
    }
    const double n = static_cast<double>(power.size());
    double mean = 0.0;
    for (double p : power) mean += p;
    mean /= n;
    double var = 0.0;
    for (double p : power) var += (p - mean) * (p - mean);
    const double se = std::sqrt(var / (n - 1.0) / n);
    // E|g|^2 is the complex variance
    CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("config parsing")
{
    CHECK(parse_config("") == ScenarioConfig{});
    CHECK(parse_config("# nothing but a comment\n\n   \n") == ScenarioConfig{});

    const auto c = parse_config("antenna_count = 6  # more antennas\nuser_count=2\nrounding = threshold\n"
                                "velocity_clamp_m = 0.05\nper_coordinate_random = true\n"
                                "latency_caps_s = 0.1, 0.2\ninitial_positions = reference\n");
    CHECK(c.antenna_count == 6);
    CHECK(c.user_count == 2);
    CHECK(c.rounding == RoundingMode::Threshold);
    CHECK(c.velocity_clamp == 0.05);
    CHECK(c.per_coordinate_random);
    CHECK(c.latency_caps_s == std::vector<double>{0.1, 0.2});
    CHECK(c.initial_positions == InitialPositions::Reference);
    CHECK_FALSE(parse_config("velocity_clamp_m = auto\n").velocity_clamp.has_value());

    SUBCASE("errors name the line and key")
    {
        try {
            (void)parse_config("antenna_count = 4\nantena_count = 5\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            const std::string what = e.what();
            CHECK(what.find("line 2") != std::string::npos);
            CHECK(what.find("antena_count") != std::string::npos);
        }
        CHECK_THROWS_AS(parse_config("wavelength_m = abc\n"), ParseError);
        CHECK_THROWS_AS(parse_config("wavelength_m\n"), ParseError);
        CHECK_THROWS_AS(parse_config("user_count = 2\nuser_count = 3\n"), ParseError);
        CHECK_THROWS_AS(parse_config("user_count = -1\n"), ParseError);
        CHECK_THROWS_AS(parse_config("rounding = sometimes\n"), ParseError);
    }
    SUBCASE("invariant breaches name the invariant")
    {
        try {
            (void)parse_config("user_count = 5\nantenna_count = 4\n");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("N <= M") != std::string::npos);
        }
        CHECK_THROWS_AS(parse_config("min_spacing_m = 0.5\n"), ValidationError);
        CHECK_THROWS_AS(parse_config("data_size_min_kb = 3\n"), ValidationError);
        CHECK_THROWS_AS(parse_config("outer_iterations = 0\n"), ValidationError);
    }
}

TEST_CASE("config round trip")
{
    ScenarioConfig c;
    CHECK(parse_config(serialize_config(c)) == c);
    c.antenna_count = 8;
    c.user_count = 5;
    c.wavelength = 0.1 / 3.0;
    c.region_half_width = 0.15;
    c.min_spacing = 0.1 / 3.0;
    c.reference_gain_db = -37.123456789012345;
    c.transmit_power_dbm_per_user = {30.0, 29.5, 28.25, 27.0, 26.1};
    c.latency_caps_s = {0.1, 0.2, 0.3, 0.4, 1.0 / 7.0};
    c.velocity_clamp = 0.031;
    c.per_coordinate_random = true;
    c.rounding = RoundingMode::Threshold;
    c.initial_positions = InitialPositions::Reference;
    c.rng_seed = 18446744073709551615ULL;
    CHECK(parse_config(serialize_config(c)) == c);

    const auto dir = scratch_dir("config");
    {
        std::ofstream(dir / "c.cfg") << serialize_config(c);
        std::ofstream(dir / "empty.cfg");
    }
    CHECK(load_config(dir / "c.cfg") == c);
    CHECK(load_config(dir / "empty.cfg") == ScenarioConfig{});
    CHECK_THROWS_AS(load_config(dir / "missing.cfg"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("number formatting reads back exactly")
{
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0, 12345.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("result export")
{
    const auto s = sample_scenario(ScenarioConfig{}, 3);
    IppsoConfig c;
    c.outer_iterations = 1;
    c.swarm.particle_count = 10;
    c.swarm.max_iterations = 2;
    c.rng_seed = 3;
    std::vector<TaggedResult> results{{scheme::kIppso, 3, run_ippso(s, c)}};
    const auto dir = scratch_dir("export");
    export_results(results, dir);
    const auto trace = slurp(dir / kTraceFileName);
    const auto summary = slurp(dir / kSummaryFileName);
    // header + the initial swarm + 2 iterations
    CHECK(line_count(trace) == 1 + 3);
    CHECK(trace.rfind("scheme,seed,outer_iter,inner_iter,global_best_fitness,total_latency,beta_1,beta_2,beta_3,"
                      "antenna_x_1,antenna_x_2,antenna_x_3,antenna_x_4,antenna_y_1,antenna_y_2,antenna_y_3,"
                      "antenna_y_4\n",
                      0) == 0);
    CHECK(line_count(summary) == 2);
    CHECK(summary.rfind("scheme,seed,M,N,total_latency,mean_rate_bps,runtime_seconds\n", 0) == 0);
    const auto row = summary.substr(summary.find('\n') + 1);
    CHECK(row.rfind("ippso,3,4,3," + format_double(results[0].result.total_latency) + ",", 0) == 0);
    CHECK(row.substr(row.rfind(',') + 1) == "0\n");

    export_results(results, dir);
    CHECK(slurp(dir / kTraceFileName) == trace);
    CHECK(slurp(dir / kSummaryFileName) == summary);

    SUBCASE("rows are sorted and padded for mixed sizes")
    {
        ScenarioConfig big;
        big.antenna_count = 6;
        const auto s6 = sample_scenario(big, 1);
        std::vector<TaggedResult> mixed{{scheme::kBaselineLocal, 2, run_baseline_local_only(s6)},
                                        {scheme::kBaselineLocal, 1, run_baseline_local_only(s)},
                                        {scheme::kIppso, 3, results[0].result}};
        export_results(mixed, dir);
        const auto t = slurp(dir / kTraceFileName);
        CHECK(t.find("antenna_y_6\n") != std::string::npos);
        const auto first = t.find("baseline_local,1,");
        const auto second = t.find("baseline_local,2,");
        const auto third = t.find("ippso,3,");
        CHECK(first < second);
        CHECK(second < third);
        // the M=4 row leaves two x and two y cells empty
        const auto line_end = t.find('\n', first);
        const auto line = t.substr(first, line_end - first);
        CHECK(std::count(line.begin(), line.end(), ',') ==
              std::count(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.find('\n')), ','));
        CHECK(line.find(",,") != std::string::npos);
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(export_results(std::vector<TaggedResult>{}, dir), ValidationError);
        std::ofstream(dir / "blocker") << "x";
        CHECK_THROWS_AS(export_results(results, dir / "blocker" / "sub"), IoError);
    }
    fs::remove_all(dir);
}
