// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace famec {

/// Per-user training workload. Data is measured in bits, work in cycles per bit.
struct UserProfile {
    double cycles_per_bit = 1000.0;        // C_n
    double data_size = 8192.0;             // D_n, bits
    double minibatch_ratio = 0.5;          // epsilon_n
    double local_iterations = 10.0;        // iota_n
    double local_cpu_frequency = 1e9;      // f_n^loc, Hz
    double model_size_factor = 0.1;        // v, V_n = v D_n

    double model_size() const { return model_size_factor * data_size; }
};

struct ServerProfile {
    double cycles_per_bit = 1000.0;        // C_M
    double minibatch_ratio = 0.5;          // epsilon_M
    double server_iterations = 10.0;       // iota_M
    double max_total_frequency = 10e9;     // f_M bar, Hz
};

/// Offload ratio and server CPU share per user.
struct AllocationState {
    std::vector<double> offload_ratios;      // beta_n in [0, 1]
    std::vector<double> server_frequencies;  // f_n^M, Hz

    static AllocationState local_only(std::size_t user_count)
    {
        return {std::vector<double>(user_count, 0.0), std::vector<double>(user_count, 0.0)};
    }
};

void validate(const UserProfile& user);
void validate(const ServerProfile& server);

double local_latency(const UserProfile& user);
double upload_latency(const UserProfile& user, double rate);
double offload_transfer_latency(const UserProfile& user, double rate);

/// Cycles the server spends on user n's full dataset, C_M D_n eps_M iota_M.
double server_workload(const UserProfile& user, const ServerProfile& server);
double server_exec_latency(const UserProfile& user, const ServerProfile& server, double f_server);

/// (1 - beta)(T_loc + T_up) + beta (T_off + T_exe). Server terms are skipped at beta = 0.
double user_total_latency(const UserProfile& user, const ServerProfile& server, double beta,
                          double f_server, double rate);

std::vector<double> per_user_latencies(std::span<const UserProfile> users, const ServerProfile& server,
                                       const AllocationState& allocation, std::span<const double> rates);

double system_total_latency(std::span<const UserProfile> users, const ServerProfile& server,
                            const AllocationState& allocation, std::span<const double> rates);

/// d^2 T / d (f_n^M)^2 = 2 C_M D_n eps_M iota_M beta_n / (f_n^M)^3.
double server_frequency_curvature(const UserProfile& user, const ServerProfile& server, double beta,
                                  double f_server);

} // namespace famec
