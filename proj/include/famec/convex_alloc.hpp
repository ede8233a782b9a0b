// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "famec/latency_model.hpp"

namespace famec {

/// Offload ratios and server CPU shares for fixed antenna positions (fixed rates).
struct AllocationProblem {
    std::vector<UserProfile> users;
    ServerProfile server;
    std::vector<double> rates;         // bits/s
    std::vector<double> latency_caps;  // seconds, one per user

    std::size_t user_count() const { return users.size(); }
};

struct AllocationSolution {
    AllocationState allocation;
    double objective = 0.0;
    double kkt_residual = 0.0;
    bool feasible = true;
};

/// Relative slack on the per-user latency caps when judging feasibility.
inline constexpr double kLatencyCapTolerance = 1e-9;

void validate(const AllocationProblem& problem);

/// Local-only latency of each user, T_loc + T_up at the given rates.
std::vector<double> local_only_latencies(std::span<const UserProfile> users, std::span<const double> rates);

double allocation_objective(const AllocationProblem& problem, const AllocationState& allocation);

/// Minimizes the total latency over beta in [0,1]^N and f^M with
/// sum f^M <= f_M bar and T_n <= cap_n.
///
/// For fixed f^M the objective is linear and separable in beta, so an optimum
/// with binary beta always exists. The solver enumerates offload sets (greedy
/// local search above kMaxEnumeratedUsers users) and, per set, solves the convex
/// CPU-share subproblem with a log-barrier Newton method. `tolerance` bounds
/// the barrier duality gap relative to the objective.
///
/// If no allocation meets every latency cap, the least-violating allocation is
/// returned with feasible = false.
AllocationSolution solve_allocation(const AllocationProblem& problem, double tolerance = 1e-9);

inline constexpr std::size_t kMaxEnumeratedUsers = 12;

/// Minimizes sum_n workload_n / f_n subject to f_n >= lower_n and sum f_n <= total
/// with a log-barrier interior-point method. Returns f with sum f_n == total when
/// the lower bounds leave room. Throws ValidationError if sum lower_n >= total.
std::vector<double> barrier_frequency_shares(std::span<const double> workloads,
                                             std::span<const double> lower_bounds, double total,
                                             double tolerance);

/// Closed-form shares f_n = total * sqrt(w_n) / sum sqrt(w), zero where w_n == 0.
std::vector<double> sqrt_proportional_shares(std::span<const double> workloads, double total);

/// Maps beta_n to 1 when beta_n >= threshold and 0 otherwise, then re-solves the
/// server shares for the binary offload set.
AllocationState threshold_round(const AllocationProblem& problem, const AllocationState& allocation,
                                double threshold = 0.5);

/// Largest projected-gradient component over (beta, f^M / f_M bar), divided by
/// the objective. Active bounds, C3 and active latency caps are accounted for
/// with the best nonnegative C3 multiplier. Zero at a KKT point.
double kkt_residual(const AllocationProblem& problem, const AllocationState& allocation);

} // namespace famec
