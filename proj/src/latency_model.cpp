// SPDX-License-Identifier: Apache-2.0
#include "famec/latency_model.hpp"

#include <string>

#include "famec/errors.hpp"

namespace famec {

void validate(const UserProfile& user)
{
    if (!(user.cycles_per_bit > 0.0) || !(user.data_size > 0.0) || !(user.minibatch_ratio > 0.0)
        || !(user.minibatch_ratio <= 1.0) || !(user.local_iterations > 0.0)
        || !(user.local_cpu_frequency > 0.0) || !(user.model_size_factor > 0.0)) {
        throw ValidationError("UserProfile: fields must be positive and minibatch_ratio <= 1");
    }
}

void validate(const ServerProfile& server)
{
    if (!(server.cycles_per_bit > 0.0) || !(server.minibatch_ratio > 0.0) || !(server.minibatch_ratio <= 1.0)
        || !(server.server_iterations > 0.0) || !(server.max_total_frequency > 0.0)) {
        throw ValidationError("ServerProfile: fields must be positive and minibatch_ratio <= 1");
    }
}

double local_latency(const UserProfile& user)
{
    return user.cycles_per_bit * user.data_size * user.minibatch_ratio * user.local_iterations
           / user.local_cpu_frequency;
}

double upload_latency(const UserProfile& user, double rate)
{
    if (!(rate > 0.0)) {
        throw ZeroRate("upload_latency: rate must be positive, got " + std::to_string(rate));
    }
    return user.model_size() / rate;
}

double offload_transfer_latency(const UserProfile& user, double rate)
{
    if (!(rate > 0.0)) {
        throw ZeroRate("offload_transfer_latency: rate must be positive, got " + std::to_string(rate));
    }
    return user.data_size / rate;
}

double server_workload(const UserProfile& user, const ServerProfile& server)
{
    return server.cycles_per_bit * user.data_size * server.minibatch_ratio * server.server_iterations;
}

double server_exec_latency(const UserProfile& user, const ServerProfile& server, double f_server)
{
    if (!(f_server > 0.0)) {
        throw ZeroFrequency("server_exec_latency: server frequency must be positive, got "
                            + std::to_string(f_server));
    }
    return server_workload(user, server) / f_server;
}

double user_total_latency(const UserProfile& user, const ServerProfile& server, double beta,
                          double f_server, double rate)
{
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw ValidationError("user_total_latency: offload ratio must lie in [0, 1], got " + std::to_string(beta));
    }
    const double local_branch = local_latency(user) + upload_latency(user, rate);
    if (beta == 0.0) {
        return local_branch;
    }
    const double offload_branch = offload_transfer_latency(user, rate) + server_exec_latency(user, server, f_server);
    if (beta == 1.0) {
        return offload_branch;
    }
    return (1.0 - beta) * local_branch + beta * offload_branch;
}

std::vector<double> per_user_latencies(std::span<const UserProfile> users, const ServerProfile& server,
                                       const AllocationState& allocation, std::span<const double> rates)
{
    const auto n = users.size();
    if (allocation.offload_ratios.size() != n || allocation.server_frequencies.size() != n || rates.size() != n) {
        throw ValidationError("per_user_latencies: users, allocation and rates must have the same length");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = user_total_latency(users[i], server, allocation.offload_ratios[i],
                                    allocation.server_frequencies[i], rates[i]);
    }
    return out;
}

double system_total_latency(std::span<const UserProfile> users, const ServerProfile& server,
                            const AllocationState& allocation, std::span<const double> rates)
{
    double total = 0.0;
    for (double t : per_user_latencies(users, server, allocation, rates)) {
        total += t;
    }
    return total;
}

double server_frequency_curvature(const UserProfile& user, const ServerProfile& server, double beta,
                                  double f_server)
{
    return 2.0 * server_workload(user, server) * beta / (f_server * f_server * f_server);
}

} // namespace famec
