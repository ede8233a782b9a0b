# SPDX-License-Identifier: Apache-2.0
import math

import numpy as np
import pytest

import famec


def test_version():
    assert famec.__version__


def test_unit_conversion():
    assert famec.dbm_to_watts(30.0) == 1.0
    assert famec.dbm_to_watts(-174.0) * 1e6 == pytest.approx(3.981071705534986e-15, rel=1e-12)


def test_channel_and_zf():
    spec = famec.UserChannelSpec()
    spec.elevation_aoas = [math.pi / 2]
    spec.azimuth_aoas = [0.0]
    spec.path_gains = [1.0 + 0.0j]
    f = famec.field_response_vector(famec.PlanarPosition(0.05, 0.0), spec, 0.1)
    assert abs(f[0] + 1.0) < 1e-12

    rng = np.random.default_rng(1)
    h = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    w = famec.zf_combining_matrix(h)
    assert np.max(np.abs(w.conj().T @ h - np.eye(3))) < 1e-9

    with pytest.raises(famec.RankDeficientChannel):
        famec.zf_combining_matrix(np.ones((4, 2), dtype=complex))

    one = np.ones((1, 1), dtype=complex)
    assert famec.per_user_rate(one, one, 0, 2.0, 2.0, 1.0) == pytest.approx(1.0)


def test_latency_example():
    u = famec.UserProfile()
    u.data_size = 16000.0
    u.local_cpu_frequency = 1e9
    assert famec.local_latency(u) == pytest.approx(0.08)
    assert famec.upload_latency(u, 1.6e6) == pytest.approx(1e-3)


def test_allocation():
    scenario = famec.sample_scenario(famec.ScenarioConfig(), 3)
    problem = famec.AllocationProblem()
    problem.users = scenario.users
    problem.server = scenario.server
    problem.rates = famec.zf_rates(scenario.reference_positions, scenario.channel_specs,
                                   scenario.wavelength, scenario.noise_power, scenario.bandwidth)
    problem.latency_caps = scenario.latency_caps
    sol = famec.solve_allocation(problem)
    assert sol.feasible
    assert sum(sol.allocation.server_frequencies) <= scenario.server.max_total_frequency
    assert sol.kkt_residual < 1e-6
    rounded = famec.threshold_round(problem, sol.allocation, 0.5)
    assert set(rounded.offload_ratios) <= {0.0, 1.0}


def test_small_run_and_baselines():
    config = famec.ScenarioConfig()
    config.pso_iterations = 5
    config.particle_count = 10
    config.outer_iterations = 2
    scenario = famec.sample_scenario(config, 7)
    solver = famec.make_ippso_config(config)
    result = famec.run_ippso(scenario, solver)
    assert len(result.outer_trace) == 2
    for trace in result.inner_fitness_traces:
        assert all(b <= a for a, b in zip(trace, trace[1:]))
    local = famec.run_baseline_local_only(scenario)
    fixed = famec.run_baseline_fixed_antenna(scenario, solver)
    assert fixed.total_latency <= local.total_latency
    again = famec.run_ippso(scenario, solver)
    assert again.total_latency == result.total_latency


def test_config_round_trip_and_errors():
    config = famec.parse_config("antenna_count = 6\nuser_count = 2\n")
    assert config.antenna_count == 6
    assert famec.parse_config(famec.serialize_config(config)) == config
    with pytest.raises(famec.ValidationError):
        famec.parse_config("user_count = 5\nantenna_count = 4\n")
    with pytest.raises(famec.ParseError):
        famec.parse_config("nonsense = 1\n")
