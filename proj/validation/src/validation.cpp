// SPDX-License-Identifier: Apache-2.0
#include "famec/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "famec/random.hpp"
#include "famec/scenario.hpp"

namespace famec::validation {

namespace {

constexpr std::uint64_t kValidationStream = 0x7661;

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

CheckResult finish(std::string name, double measured, double threshold, const Stopwatch& clock,
                   std::string detail = {})
{
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.threshold = threshold;
    r.passed = measured <= threshold;
    r.detail = std::move(detail);
    r.seconds = clock.seconds();
    return r;
}

struct ChannelInstance {
    std::vector<UserChannelSpec> users;
    std::vector<PlanarPosition> positions;
    double wavelength = 0.1;
    double noise_power = 0.0;
    double bandwidth = 1e6;
};

ChannelInstance random_channel_instance(std::size_t antennas, std::size_t users, std::uint64_t seed)
{
    ScenarioConfig config;
    config.antenna_count = antennas;
    config.user_count = users;
    const auto scenario = sample_scenario(config, seed);
    auto rng = substream(seed, kValidationStream, 1);
    std::uniform_real_distribution<double> coord(-config.region_half_width, config.region_half_width);
    ChannelInstance out;
    out.users = scenario.channel_specs;
    out.positions.resize(antennas);
    for (auto& p : out.positions) {
        p = {coord(rng), coord(rng)};
    }
    out.wavelength = scenario.wavelength;
    out.noise_power = scenario.noise_power;
    out.bandwidth = scenario.bandwidth;
    return out;
}

double objective_grid_recursive(const AllocationProblem& problem, const std::vector<double>& f_axis,
                                const std::vector<double>& beta_axis, std::vector<double>& shares,
                                std::size_t depth, AllocationState& best_state, double& best)
{
    const auto n = problem.user_count();
    if (depth < n) {
        for (double f : f_axis) {
            shares[depth] = f;
            objective_grid_recursive(problem, f_axis, beta_axis, shares, depth + 1, best_state, best);
        }
        return best;
    }
    const double total = problem.server.max_total_frequency;
    double sum = 0.0;
    for (double f : shares) {
        sum += f;
    }
    std::vector<double> f = shares;
    if (sum > total) {
        for (auto& v : f) {
            v *= total / sum;
        }
    }
    // For a fixed f vector the objective is a sum of per-user terms, so each
    // beta is minimized over its axis independently.
    AllocationState state = AllocationState::local_only(n);
    state.server_frequencies = f;
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double user_best = std::numeric_limits<double>::infinity();
        for (double beta : beta_axis) {
            const double t = user_total_latency(problem.users[i], problem.server, beta, f[i], problem.rates[i]);
            if (t <= problem.latency_caps[i] * (1.0 + kLatencyCapTolerance) && t < user_best) {
                user_best = t;
                state.offload_ratios[i] = beta;
            }
        }
        value += user_best;
    }
    if (value < best) {
        best = value;
        best_state = state;
    }
    return best;
}

} // namespace

Eigen::VectorXcd naive_channel_vector(const std::vector<PlanarPosition>& positions, const UserChannelSpec& spec,
                                      double wavelength)
{
    Eigen::VectorXcd h(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t m = 0; m < positions.size(); ++m) {
        std::complex<double> acc = 0.0;
        for (std::size_t l = 0; l < spec.path_gains.size(); ++l) {
            const double theta = spec.elevation_aoas[l];
            const double phi = spec.azimuth_aoas[l];
            const double rho = positions[m].x * std::sin(theta) * std::cos(phi) + positions[m].y * std::cos(theta);
            const double angle = 2.0 * std::numbers::pi * rho / wavelength;
            const std::complex<double> field(std::cos(angle), std::sin(angle));
            acc += std::conj(field) * spec.path_gains[l];
        }
        h(static_cast<Eigen::Index>(m)) = acc;
    }
    return h;
}

double sinr_rate(const Eigen::MatrixXcd& channel, const Eigen::MatrixXcd& combiner, std::size_t user,
                 const std::vector<double>& powers, double noise_power, double bandwidth)
{
    const auto n = static_cast<Eigen::Index>(user);
    const auto w = combiner.col(n);
    const double signal = std::norm(w.dot(channel.col(n))) * powers[user];
    double interference = 0.0;
    for (Eigen::Index k = 0; k < channel.cols(); ++k) {
        if (k != n) {
            interference += std::norm(w.dot(channel.col(k))) * powers[static_cast<std::size_t>(k)];
        }
    }
    return bandwidth * std::log2(1.0 + signal / (interference + w.squaredNorm() * noise_power));
}

GridAllocation grid_allocation_oracle(const AllocationProblem& problem, std::size_t points)
{
    const double total = problem.server.max_total_frequency;
    std::vector<double> f_axis(points);
    std::vector<double> beta_axis(points);
    for (std::size_t i = 0; i < points; ++i) {
        f_axis[i] = total * static_cast<double>(i + 1) / static_cast<double>(points);
        beta_axis[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    }
    std::vector<double> shares(problem.user_count());
    GridAllocation out;
    out.objective = std::numeric_limits<double>::infinity();
    objective_grid_recursive(problem, f_axis, beta_axis, shares, 0, out.allocation, out.objective);
    return out;
}

GridLayout grid_antenna_oracle(const EvaluationContext& context, const SwarmConfig& config, std::size_t points)
{
    GridLayout best;
    best.fitness = std::numeric_limits<double>::infinity();
    const double a = config.region_half_width;
    for (std::size_t i = 0; i < points; ++i) {
        for (std::size_t j = 0; j < points; ++j) {
            const double x = -a + 2.0 * a * static_cast<double>(i) / static_cast<double>(points - 1);
            const double y = -a + 2.0 * a * static_cast<double>(j) / static_cast<double>(points - 1);
            const std::vector<double> coords{x, y};
            const double value = fitness(coords, context, config);
            if (value < best.fitness) {
                best.fitness = value;
                best.position = {x, y};
            }
        }
    }
    return best;
}

AllocationProblem random_allocation_problem(std::size_t users, std::uint64_t seed)
{
    ScenarioConfig config;
    config.antenna_count = std::max<std::size_t>(users, 4);
    config.user_count = users;
    auto scenario = sample_scenario(config, seed);
    auto rng = substream(seed, kValidationStream, 2);
    // Budgets from scarce to plentiful so that some users stay local.
    std::uniform_real_distribution<double> budget(0.5e9, 10e9);
    scenario.server.max_total_frequency = budget(rng);
    AllocationProblem problem;
    problem.users = scenario.users;
    problem.server = scenario.server;
    problem.rates = zf_rates(scenario.reference_positions, scenario.channel_specs, scenario.wavelength,
                             scenario.noise_power, scenario.bandwidth);
    problem.latency_caps = local_only_latencies(problem.users, problem.rates);
    return problem;
}

CheckResult check_zf_identity(std::size_t instances, std::uint64_t seed)
{
    Stopwatch clock;
    double worst = 0.0;
    for (std::size_t i = 0; i < instances; ++i) {
        const auto inst = random_channel_instance(4, 3, seed + i);
        const auto h = channel_matrix(inst.positions, inst.users, inst.wavelength);
        const auto w = zf_combining_matrix(h);
        const Eigen::MatrixXcd residual = w.entries.adjoint() * h.entries - Eigen::MatrixXcd::Identity(3, 3);
        worst = std::max(worst, residual.cwiseAbs().maxCoeff());
    }
    return finish("ZF identity max |W^H H - I| (4x3)", worst, 1e-9, clock,
                  std::to_string(instances) + " instances");
}

CheckResult check_rate_equivalence(std::size_t instances, std::uint64_t seed)
{
    Stopwatch clock;
    double worst = 0.0;
    for (std::size_t i = 0; i < instances; ++i) {
        const auto inst = random_channel_instance(4, 3, seed + i);
        const auto h = channel_matrix(inst.positions, inst.users, inst.wavelength);
        const auto w = zf_combining_matrix(h);
        Eigen::MatrixXcd naive(4, 3);
        std::vector<double> powers;
        for (std::size_t n = 0; n < inst.users.size(); ++n) {
            naive.col(static_cast<Eigen::Index>(n)) = naive_channel_vector(inst.positions, inst.users[n], inst.wavelength);
            powers.push_back(inst.users[n].transmit_power);
        }
        for (std::size_t n = 0; n < inst.users.size(); ++n) {
            const double fast = per_user_rate(h, w, n, powers[n], inst.noise_power, inst.bandwidth);
            const double full = sinr_rate(naive, w.entries, n, powers, inst.noise_power, inst.bandwidth);
            worst = std::max(worst, std::abs(fast - full) / std::abs(full));
        }
    }
    return finish("ZF rate vs full SINR rate, relative difference", worst, 1e-9, clock,
                  std::to_string(instances) + " instances");
}

CheckResult check_hessian_diagonal(std::size_t points, std::uint64_t seed)
{
    Stopwatch clock;
    auto rng = substream(seed, kValidationStream, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        UserProfile user;
        user.cycles_per_bit = 200.0 + 1800.0 * unit(rng);
        user.data_size = 4096.0 + 12288.0 * unit(rng);
        user.minibatch_ratio = 0.1 + 0.9 * unit(rng);
        user.local_iterations = 1.0 + 19.0 * unit(rng);
        user.local_cpu_frequency = 0.8e9 + 0.2e9 * unit(rng);
        ServerProfile server;
        server.cycles_per_bit = 200.0 + 1800.0 * unit(rng);
        server.minibatch_ratio = 0.1 + 0.9 * unit(rng);
        server.server_iterations = 1.0 + 19.0 * unit(rng);
        const double beta = 0.05 + 0.95 * unit(rng);
        const double f = std::pow(10.0, 8.0 + 2.0 * unit(rng));
        const double rate = std::pow(10.0, 6.0 + 2.0 * unit(rng));

        const double h = 1e-4 * f;
        auto t = [&](double ff) { return user_total_latency(user, server, beta, ff, rate); };
        const double fd = (t(f + h) - 2.0 * t(f) + t(f - h)) / (h * h);
        const double analytic = server_frequency_curvature(user, server, beta, f);
        worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
    }
    return finish("d2T/df^2 analytic vs central differences, relative", worst, 1e-4, clock,
                  std::to_string(points) + " points");
}

CheckResult check_allocation_grid_gap(std::size_t instances, std::uint64_t seed, std::size_t points)
{
    Stopwatch clock;
    double worst = 0.0;
    for (std::size_t i = 0; i < instances; ++i) {
        const auto problem = random_allocation_problem(2, seed + i);
        const auto solved = solve_allocation(problem);
        const auto grid = grid_allocation_oracle(problem, points);
        worst = std::max(worst, std::abs(solved.objective - grid.objective) / grid.objective);
    }
    return finish("allocation solver vs " + std::to_string(points) + "-point grid, relative gap", worst, 0.01, clock,
                  std::to_string(instances) + " N=2 instances");
}

CheckResult check_pso_grid_gap(std::size_t instances, std::uint64_t seed, std::size_t points, std::size_t threads,
                               std::vector<std::vector<double>>* traces)
{
    Stopwatch clock;
    double worst = 0.0;
    for (std::size_t i = 0; i < instances; ++i) {
        ScenarioConfig config;
        config.antenna_count = 1;
        config.user_count = 1;
        // Narrow band so that the transfer time is comparable to compute time.
        config.bandwidth_hz = 1e5;
        const auto s = sample_scenario(config, seed + i);
        EvaluationContext context{s.users, s.server, s.channel_specs,
                                  AllocationState{{1.0}, {s.server.max_total_frequency}},
                                  {1e3}, s.wavelength, s.noise_power, s.bandwidth};
        SwarmConfig swarm;
        swarm.region_half_width = s.region_half_width;
        swarm.min_spacing = s.min_spacing;
        swarm.velocity_clamp = s.region_half_width / 2.0;
        const auto pso = run_pso(swarm, context, 1, seed + i, {}, threads);
        if (traces != nullptr) {
            traces->push_back(pso.fitness_trace);
        }
        const auto grid = grid_antenna_oracle(context, swarm, points);
        worst = std::max(worst, std::abs(pso.best_fitness - grid.fitness) / grid.fitness);
    }
    return finish("PSO vs " + std::to_string(points) + "x" + std::to_string(points) + " grid, relative gap", worst,
                  0.02, clock, std::to_string(instances) + " M=1 N=1 instances");
}

CheckResult check_penalty_exactness(std::size_t cases, std::uint64_t seed)
{
    Stopwatch clock;
    SwarmConfig config;
    auto rng = substream(seed, kValidationStream, 4);
    std::uniform_real_distribution<double> coord(-config.region_half_width, config.region_half_width);
    std::uniform_real_distribution<double> latency(0.01, 0.1);
    std::uniform_int_distribution<int> antennas(2, 6);
    std::uniform_int_distribution<int> users(1, 4);
    std::uniform_int_distribution<int> kind(0, 3);
    std::bernoulli_distribution coin(0.5);

    std::size_t mismatches = 0;
    std::size_t boundary_cases = 0;
    std::size_t zero_cases = 0;
    for (std::size_t c = 0; c < cases; ++c) {
        const int type = kind(rng);
        std::vector<PlanarPosition> pos(static_cast<std::size_t>(antennas(rng)));
        std::vector<double> t(static_cast<std::size_t>(users(rng)));
        std::vector<double> caps(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            caps[i] = latency(rng);
            t[i] = coin(rng) ? caps[i] * (0.5 + 0.5 * coin(rng)) : latency(rng);
        }
        for (std::size_t m = 0; m < pos.size(); ++m) {
            pos[m] = {coord(rng), coord(rng)};
        }
        boundary_cases += type == 0 ? 0 : 1;
        if (type == 1 || type == 2) {
            // Lattice with spacing exactly d0 along x; distance d0 is allowed.
            const double d0 = config.min_spacing;
            for (std::size_t m = 0; m < pos.size(); ++m) {
                pos[m] = {static_cast<double>(m % 3) * d0 - d0, m < 3 ? -d0 : (m < 6 ? 0.0 : d0)};
            }
        }
        if (type == 2 || type == 3) {
            for (std::size_t i = 0; i < t.size(); ++i) {
                t[i] = coin(rng) ? caps[i] : std::nextafter(caps[i], 1.0);
            }
            if (coin(rng)) {
                t.assign(caps.begin(), caps.end());
            }
        }

        bool satisfied = true;
        bool ambiguous = false;
        for (std::size_t m = 0; m < pos.size(); ++m) {
            for (std::size_t k = m + 1; k < pos.size(); ++k) {
                const double dx = pos[m].x - pos[k].x;
                const double dy = pos[m].y - pos[k].y;
                const double d = std::sqrt(dx * dx + dy * dy);
                satisfied = satisfied && d >= config.min_spacing;
                ambiguous = ambiguous || (dx != 0.0 && dy != 0.0 && std::abs(d - config.min_spacing) < 1e-12);
            }
        }
        for (std::size_t i = 0; i < t.size(); ++i) {
            satisfied = satisfied && t[i] <= caps[i];
        }
        if (ambiguous) {
            continue;
        }
        const bool zero = penalty(pos, t, caps, config) == 0.0;
        zero_cases += zero ? 1 : 0;
        mismatches += zero != satisfied ? 1 : 0;
    }
    std::ostringstream detail;
    detail << cases << " cases, " << boundary_cases << " boundary cases, " << zero_cases << " zero-penalty";
    return finish("penalty == 0 iff all constraints hold (mismatches)", static_cast<double>(mismatches), 0.0, clock,
                  detail.str());
}

std::vector<CheckResult> run_all_checks(std::uint64_t seed, std::size_t threads)
{
    return {check_zf_identity(100, seed),        check_rate_equivalence(100, seed),
            check_hessian_diagonal(50, seed),    check_allocation_grid_gap(10, seed),
            check_pso_grid_gap(5, seed, 200, threads), check_penalty_exactness(1000, seed)};
}

} // namespace famec::validation
