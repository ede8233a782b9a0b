# SPDX-License-Identifier: Apache-2.0
"""Fluid-antenna MEC latency minimization (C++ core)."""

from ._core import (  # noqa: F401
    AllocationProblem,
    AllocationSolution,
    AllocationState,
    FamecError,
    InitialPositions,
    IppsoConfig,
    ParseError,
    PlanarPosition,
    RankDeficientChannel,
    RoundingMode,
    RunResult,
    ScenarioConfig,
    ScenarioInstance,
    ServerProfile,
    SwarmConfig,
    UserChannelSpec,
    UserProfile,
    ValidationError,
    __version__,
    channel_vector,
    dbm_to_watts,
    field_response_vector,
    kkt_residual,
    local_latency,
    make_ippso_config,
    offload_transfer_latency,
    parse_config,
    penalty,
    per_user_rate,
    phase_difference,
    reference_array,
    run_baseline_fixed_antenna,
    run_baseline_local_only,
    run_ippso,
    sample_scenario,
    serialize_config,
    server_exec_latency,
    solve_allocation,
    system_total_latency,
    threshold_round,
    upload_latency,
    user_total_latency,
    validate,
    zf_combining_matrix,
    zf_rates,
)
