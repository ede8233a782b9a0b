// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent reference computations (naive loops, brute-force grids, finite
// differences) and the property checks built on them. Nothing here reuses the
// code path it checks.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "famec/channel_model.hpp"
#include "famec/convex_alloc.hpp"
#include "famec/pso_position.hpp"

namespace famec::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;   // worst observed value
    double threshold = 0.0;  // pass limit for `measured`
    std::string detail;
    double seconds = 0.0;
};

/// h_m = sum_l conj(exp(j 2 pi rho_l(d_m) / lambda)) g_l, written out with scalars.
Eigen::VectorXcd naive_channel_vector(const std::vector<PlanarPosition>& positions, const UserChannelSpec& spec,
                                      double wavelength);

/// Rate from the full SINR, interference taken as sum_{k != n} |w_n^H h_k|^2 p_k.
double sinr_rate(const Eigen::MatrixXcd& channel, const Eigen::MatrixXcd& combiner, std::size_t user,
                 const std::vector<double>& powers, double noise_power, double bandwidth);

struct GridAllocation {
    double objective = 0.0;
    AllocationState allocation;
};

/// Exhaustive search over beta on `points` values in [0, 1] and f on `points`
/// values in (0, f_M bar] per user, projecting onto the budget by rescaling when
/// the shares overshoot. Points violating a latency cap are skipped.
/// Exploits only the per-user separability of the sum for a fixed f vector.
GridAllocation grid_allocation_oracle(const AllocationProblem& problem, std::size_t points);

struct GridLayout {
    double fitness = 0.0;
    PlanarPosition position;
};

/// Single-antenna exhaustive grid of points x points over [-A, A]^2.
GridLayout grid_antenna_oracle(const EvaluationContext& context, const SwarmConfig& config, std::size_t points);

/// Default-config draw with the given user count, a random server budget and
/// caps at the local-only latency.
AllocationProblem random_allocation_problem(std::size_t users, std::uint64_t seed);

CheckResult check_zf_identity(std::size_t instances, std::uint64_t seed);
CheckResult check_rate_equivalence(std::size_t instances, std::uint64_t seed);
CheckResult check_hessian_diagonal(std::size_t points, std::uint64_t seed);
CheckResult check_allocation_grid_gap(std::size_t instances, std::uint64_t seed, std::size_t points = 200);
/// `traces`, when given, receives every swarm's fitness trace.
CheckResult check_pso_grid_gap(std::size_t instances, std::uint64_t seed, std::size_t points = 200,
                               std::size_t threads = 1, std::vector<std::vector<double>>* traces = nullptr);
CheckResult check_penalty_exactness(std::size_t cases, std::uint64_t seed);

/// All of the above at full size.
std::vector<CheckResult> run_all_checks(std::uint64_t seed, std::size_t threads = 1);

} // namespace famec::validation
