// SPDX-License-Identifier: Apache-2.0
#include "famec/convex_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "famec/errors.hpp"

namespace famec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-user constants of the latency model at fixed rates:
// T_n(beta, f) = local + beta * (transfer + workload / f - local).
struct UserTerms {
    double local = 0.0;
    double transfer = 0.0;
    double workload = 0.0;
    double cap = 0.0;
};

std::vector<UserTerms> user_terms(const AllocationProblem& problem)
{
    std::vector<UserTerms> terms(problem.user_count());
    for (std::size_t n = 0; n < terms.size(); ++n) {
        const auto& u = problem.users[n];
        terms[n].local = local_latency(u) + upload_latency(u, problem.rates[n]);
        terms[n].transfer = offload_transfer_latency(u, problem.rates[n]);
        terms[n].workload = server_workload(u, problem.server);
        terms[n].cap = problem.latency_caps[n];
    }
    return terms;
}

bool within_cap(double latency, double cap)
{
    return latency <= cap * (1.0 + kLatencyCapTolerance);
}

// Scales f down until sum f <= total holds in floating point.
void enforce_budget(std::vector<double>& f, double total)
{
    auto sum = [&] { return std::accumulate(f.begin(), f.end(), 0.0); };
    double s = sum();
    if (s > total) {
        double scale = total / s;
        for (int guard = 0; guard < 64 && s > total; ++guard) {
            for (auto& v : f) {
                v *= scale;
            }
            s = sum();
            scale = std::nextafter(1.0, 0.0);
        }
    }
}

struct Candidate {
    AllocationState allocation;
    double objective = kInf;
    double violation = kInf;
};

// Evaluates one offload set. Returns objective = inf when the set cannot meet the caps.
Candidate evaluate_offload_set(const std::vector<UserTerms>& terms, const std::vector<bool>& offload,
                               double total_frequency, double tolerance)
{
    const auto n_users = terms.size();
    Candidate out;
    out.allocation = AllocationState::local_only(n_users);

    std::vector<std::size_t> members;
    double local_sum = 0.0;
    for (std::size_t n = 0; n < n_users; ++n) {
        if (offload[n]) {
            members.push_back(n);
        } else {
            if (!within_cap(terms[n].local, terms[n].cap)) {
                return out;
            }
            local_sum += terms[n].local;
        }
    }
    if (members.empty()) {
        out.objective = local_sum;
        out.violation = 0.0;
        return out;
    }

    std::vector<double> workloads;
    std::vector<double> lower;
    double lower_sum = 0.0;
    for (auto n : members) {
        const double slack = terms[n].cap * (1.0 + kLatencyCapTolerance) - terms[n].transfer;
        if (!(slack > 0.0)) {
            return out;
        }
        workloads.push_back(terms[n].workload);
        lower.push_back(terms[n].workload / slack);
        lower_sum += lower.back();
    }
    if (!(lower_sum < total_frequency)) {
        return out;
    }

    auto shares = barrier_frequency_shares(workloads, lower, total_frequency, tolerance);
    double objective = local_sum;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto n = members[i];
        out.allocation.offload_ratios[n] = 1.0;
        out.allocation.server_frequencies[n] = shares[i];
        objective += terms[n].transfer + terms[n].workload / shares[i];
    }
    out.objective = objective;
    out.violation = 0.0;
    return out;
}

// Allocation that ignores the caps, used to report the least-violating point.
Candidate evaluate_uncapped(const std::vector<UserTerms>& terms, const std::vector<bool>& offload,
                            double total_frequency)
{
    const auto n_users = terms.size();
    Candidate out;
    out.allocation = AllocationState::local_only(n_users);
    std::vector<double> workloads(n_users, 0.0);
    for (std::size_t n = 0; n < n_users; ++n) {
        if (offload[n]) {
            workloads[n] = terms[n].workload;
        }
    }
    const auto shares = sqrt_proportional_shares(workloads, total_frequency);
    out.objective = 0.0;
    out.violation = 0.0;
    for (std::size_t n = 0; n < n_users; ++n) {
        double t = terms[n].local;
        if (offload[n]) {
            out.allocation.offload_ratios[n] = 1.0;
            out.allocation.server_frequencies[n] = shares[n];
            t = terms[n].transfer + terms[n].workload / shares[n];
        }
        out.objective += t;
        out.violation += std::max(0.0, t - terms[n].cap);
    }
    return out;
}

std::vector<bool> mask_to_set(std::size_t mask, std::size_t n)
{
    std::vector<bool> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = ((mask >> i) & 1U) != 0;
    }
    return s;
}

} // namespace

void validate(const AllocationProblem& problem)
{
    const auto n = problem.user_count();
    if (n == 0 || problem.rates.size() != n || problem.latency_caps.size() != n) {
        throw ValidationError("AllocationProblem: users, rates and latency_caps must be non-empty and equal length");
    }
    for (const auto& u : problem.users) {
        validate(u);
    }
    validate(problem.server);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(problem.rates[i] > 0.0)) {
            throw ValidationError("AllocationProblem: rate of user " + std::to_string(i) + " must be positive");
        }
        if (!(problem.latency_caps[i] > 0.0)) {
            throw ValidationError("AllocationProblem: latency cap of user " + std::to_string(i) + " must be positive");
        }
    }
}

std::vector<double> local_only_latencies(std::span<const UserProfile> users, std::span<const double> rates)
{
    std::vector<double> out(users.size());
    for (std::size_t n = 0; n < users.size(); ++n) {
        out[n] = local_latency(users[n]) + upload_latency(users[n], rates[n]);
    }
    return out;
}

double allocation_objective(const AllocationProblem& problem, const AllocationState& allocation)
{
    return system_total_latency(problem.users, problem.server, allocation, problem.rates);
}

std::vector<double> sqrt_proportional_shares(std::span<const double> workloads, double total)
{
    std::vector<double> out(workloads.size(), 0.0);
    double norm = 0.0;
    for (double w : workloads) {
        norm += std::sqrt(std::max(w, 0.0));
    }
    if (norm == 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < workloads.size(); ++i) {
        out[i] = total * std::sqrt(std::max(workloads[i], 0.0)) / norm;
    }
    enforce_budget(out, total);
    return out;
}

std::vector<double> barrier_frequency_shares(std::span<const double> workloads,
                                             std::span<const double> lower_bounds, double total,
                                             double tolerance)
{
    using Eigen::Index;
    using Eigen::VectorXd;
    const auto n = static_cast<Index>(workloads.size());
    if (n == 0) {
        return {};
    }
    // Work in fractions of the budget; k_i is then in seconds.
    VectorXd k(n);
    VectorXd lo(n);
    for (Index i = 0; i < n; ++i) {
        k(i) = workloads[static_cast<std::size_t>(i)] / total;
        lo(i) = lower_bounds[static_cast<std::size_t>(i)] / total;
    }
    const double room = 1.0 - lo.sum();
    if (!(room > 0.0)) {
        throw ValidationError("barrier_frequency_shares: lower bounds exhaust the frequency budget");
    }
    VectorXd phi = lo.array() + room / static_cast<double>(n + 1);

    auto objective = [&](const VectorXd& p) { return (k.array() / p.array()).sum(); };
    auto strictly_feasible = [&](const VectorXd& p) {
        return (p.array() > lo.array()).all() && p.sum() < 1.0;
    };
    auto barrier_value = [&](const VectorXd& p, double mu) {
        return objective(p) - mu * ((p - lo).array().log().sum() + std::log(1.0 - p.sum()));
    };

    const double scale = objective(phi);
    const double constraints = static_cast<double>(n + 1);
    double mu = scale;
    for (int stage = 0; stage < 40; ++stage) {
        for (int iter = 0; iter < 100; ++iter) {
            const double s = 1.0 - phi.sum();
            const VectorXd gap = phi - lo;
            VectorXd grad = -(k.array() / phi.array().square()) - mu / gap.array() + mu / s;
            Eigen::MatrixXd hess = Eigen::MatrixXd::Constant(n, n, mu / (s * s));
            hess.diagonal().array() += 2.0 * k.array() / phi.array().cube() + mu / gap.array().square();
            const VectorXd step = -hess.ldlt().solve(grad);
            const double decrement2 = -grad.dot(step);
            if (!(decrement2 > 1e-15 * scale)) {
                break;
            }
            double alpha = 1.0;
            const double current = barrier_value(phi, mu);
            while (alpha > 1e-16) {
                const VectorXd trial = phi + alpha * step;
                if (strictly_feasible(trial) && barrier_value(trial, mu) <= current - 0.25 * alpha * decrement2) {
                    break;
                }
                alpha *= 0.5;
            }
            if (alpha <= 1e-16) {
                break;
            }
            phi += alpha * step;
        }
        if (constraints * mu <= tolerance * objective(phi)) {
            break;
        }
        mu *= 0.1;
    }

    // The objective decreases in every share, so the budget binds at the optimum.
    std::vector<double> f(static_cast<std::size_t>(n));
    const double fill = 1.0 / phi.sum();
    for (Index i = 0; i < n; ++i) {
        f[static_cast<std::size_t>(i)] = phi(i) * fill * total;
    }
    enforce_budget(f, total);
    return f;
}

AllocationSolution solve_allocation(const AllocationProblem& problem, double tolerance)
{
    validate(problem);
    if (!(tolerance > 0.0)) {
        throw ValidationError("solve_allocation: tolerance must be positive");
    }
    const auto n = problem.user_count();
    const auto terms = user_terms(problem);
    const double total = problem.server.max_total_frequency;

    Candidate best;
    auto consider = [&](const std::vector<bool>& set) {
        auto c = evaluate_offload_set(terms, set, total, tolerance);
        if (c.objective < best.objective) {
            best = std::move(c);
        }
        return best.objective;
    };

    if (n <= kMaxEnumeratedUsers) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            consider(mask_to_set(mask, n));
        }
    } else {
        // Single-flip local search from "offload whenever an equal share beats local".
        std::vector<bool> set(n);
        for (std::size_t i = 0; i < n; ++i) {
            set[i] = terms[i].transfer + terms[i].workload * static_cast<double>(n) / total < terms[i].local;
        }
        double current = consider(set);
        for (bool improved = true; improved;) {
            improved = false;
            for (std::size_t i = 0; i < n; ++i) {
                set[i] = !set[i];
                const double value = consider(set);
                if (value < current) {
                    current = value;
                    improved = true;
                } else {
                    set[i] = !set[i];
                }
            }
        }
    }

    AllocationSolution out;
    if (std::isfinite(best.objective)) {
        out.allocation = std::move(best.allocation);
        out.feasible = true;
    } else {
        Candidate least;
        const std::size_t limit = n <= kMaxEnumeratedUsers ? (std::size_t{1} << n) : 0;
        for (std::size_t mask = 0; mask < limit; ++mask) {
            auto c = evaluate_uncapped(terms, mask_to_set(mask, n), total);
            if (c.violation < least.violation
                || (c.violation == least.violation && c.objective < least.objective)) {
                least = std::move(c);
            }
        }
        if (limit == 0) {
            least = evaluate_uncapped(terms, std::vector<bool>(n, true), total);
        }
        out.allocation = std::move(least.allocation);
        out.feasible = false;
    }
    out.objective = allocation_objective(problem, out.allocation);
    out.kkt_residual = kkt_residual(problem, out.allocation);
    return out;
}

AllocationState threshold_round(const AllocationProblem& problem, const AllocationState& allocation,
                                double threshold)
{
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ValidationError("threshold_round: threshold must lie in (0, 1)");
    }
    const auto n = allocation.offload_ratios.size();
    AllocationState out = AllocationState::local_only(n);
    std::vector<double> workloads(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (allocation.offload_ratios[i] >= threshold) {
            out.offload_ratios[i] = 1.0;
            workloads[i] = server_workload(problem.users[i], problem.server);
        }
    }
    out.server_frequencies = sqrt_proportional_shares(workloads, problem.server.max_total_frequency);
    return out;
}

double kkt_residual(const AllocationProblem& problem, const AllocationState& allocation)
{
    const auto n = problem.user_count();
    const auto terms = user_terms(problem);
    const double total = problem.server.max_total_frequency;
    const double objective = allocation_objective(problem, allocation);

    double residual = 0.0;
    std::vector<double> f_grad(n, 0.0);
    std::vector<bool> at_lower(n, false);
    double f_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double beta = allocation.offload_ratios[i];
        const double f = allocation.server_frequencies[i];
        f_sum += f;

        const double beta_grad = f > 0.0 ? terms[i].transfer + terms[i].workload / f - terms[i].local : kInf;
        double beta_part = 0.0;
        if (beta <= 0.0) {
            beta_part = std::isfinite(beta_grad) ? std::max(0.0, -beta_grad) : 0.0;
        } else if (beta >= 1.0) {
            beta_part = std::max(0.0, beta_grad);
        } else {
            beta_part = std::abs(beta_grad);
        }
        residual = std::max(residual, beta_part);

        if (beta > 0.0) {
            f_grad[i] = f > 0.0 ? -beta * terms[i].workload * total / (f * f) : -kInf;
        }
        const double latency = user_total_latency(problem.users[i], problem.server, beta, f, problem.rates[i]);
        at_lower[i] = f <= 0.0 || (beta > 0.0 && latency >= terms[i].cap * (1.0 - kLatencyCapTolerance));
    }

    double f_part = 0.0;
    if (f_sum < total * (1.0 - 1e-9)) {
        for (double g : f_grad) {
            f_part = std::max(f_part, std::abs(g));
        }
    } else {
        // Best nonnegative multiplier for the shared budget; the optimum of this
        // piecewise-linear minimax lies at 0, a kink, or a midpoint of two kinks.
        std::vector<double> candidates{0.0};
        for (double g : f_grad) {
            candidates.push_back(-g);
        }
        const auto kinks = candidates.size();
        for (std::size_t a = 1; a < kinks; ++a) {
            for (std::size_t b = a + 1; b < kinks; ++b) {
                candidates.push_back(0.5 * (candidates[a] + candidates[b]));
            }
        }
        f_part = kInf;
        for (double mu : candidates) {
            if (!(mu >= 0.0) || !std::isfinite(mu)) {
                continue;
            }
            double worst = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double g = f_grad[i] + mu;
                worst = std::max(worst, at_lower[i] ? std::max(0.0, -g) : std::abs(g));
            }
            f_part = std::min(f_part, worst);
        }
    }
    residual = std::max(residual, f_part);
    return objective > 0.0 ? residual / objective : residual;
}

} // namespace famec
