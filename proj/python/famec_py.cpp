// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "famec/channel_model.hpp"
#include "famec/config_io.hpp"
#include "famec/convex_alloc.hpp"
#include "famec/errors.hpp"
#include "famec/ippso_driver.hpp"
#include "famec/latency_model.hpp"
#include "famec/pso_position.hpp"
#include "famec/scenario.hpp"
#include "famec/validation.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace famec;

PYBIND11_MODULE(_core, m) {
    m.doc() = R"pbdoc(
        Fluid-antenna MEC latency minimization
        --------------------------------------

        Channel model, zero-forcing rates, latency model, offloading /
        CPU-share allocation, particle-swarm antenna placement and the
        alternating optimizer with its fixed-antenna baselines.
    )pbdoc";

    auto base = py::register_exception<Error>(m, "FamecError", PyExc_RuntimeError);
    py::register_exception<RankDeficientChannel>(m, "RankDeficientChannel", base.ptr());
    py::register_exception<ZeroRate>(m, "ZeroRate", base.ptr());
    py::register_exception<ZeroFrequency>(m, "ZeroFrequency", base.ptr());
    py::register_exception<ScenarioInvalid>(m, "ScenarioInvalid", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::class_<PlanarPosition>(m, "PlanarPosition")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return PlanarPosition{x, y}; }), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &PlanarPosition::x)
        .def_readwrite("y", &PlanarPosition::y)
        .def("__repr__", [](const PlanarPosition& p) {
            return "PlanarPosition(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
        });

    py::class_<UserChannelSpec>(m, "UserChannelSpec")
        .def(py::init<>())
        .def_readwrite("elevation_aoas", &UserChannelSpec::elevation_aoas)
        .def_readwrite("azimuth_aoas", &UserChannelSpec::azimuth_aoas)
        .def_readwrite("path_gains", &UserChannelSpec::path_gains)
        .def_readwrite("transmit_power", &UserChannelSpec::transmit_power)
        .def_readwrite("distance_to_bs", &UserChannelSpec::distance_to_bs);

    py::class_<UserProfile>(m, "UserProfile")
        .def(py::init<>())
        .def_readwrite("cycles_per_bit", &UserProfile::cycles_per_bit)
        .def_readwrite("data_size", &UserProfile::data_size)
        .def_readwrite("minibatch_ratio", &UserProfile::minibatch_ratio)
        .def_readwrite("local_iterations", &UserProfile::local_iterations)
        .def_readwrite("local_cpu_frequency", &UserProfile::local_cpu_frequency)
        .def_readwrite("model_size_factor", &UserProfile::model_size_factor);

    py::class_<ServerProfile>(m, "ServerProfile")
        .def(py::init<>())
        .def_readwrite("cycles_per_bit", &ServerProfile::cycles_per_bit)
        .def_readwrite("minibatch_ratio", &ServerProfile::minibatch_ratio)
        .def_readwrite("server_iterations", &ServerProfile::server_iterations)
        .def_readwrite("max_total_frequency", &ServerProfile::max_total_frequency);

    py::class_<AllocationState>(m, "AllocationState")
        .def(py::init<>())
        .def(py::init([](std::vector<double> beta, std::vector<double> f) {
                 return AllocationState{std::move(beta), std::move(f)};
             }),
             py::arg("offload_ratios"), py::arg("server_frequencies"))
        .def_readwrite("offload_ratios", &AllocationState::offload_ratios)
        .def_readwrite("server_frequencies", &AllocationState::server_frequencies);

    py::class_<AllocationProblem>(m, "AllocationProblem")
        .def(py::init<>())
        .def_readwrite("users", &AllocationProblem::users)
        .def_readwrite("server", &AllocationProblem::server)
        .def_readwrite("rates", &AllocationProblem::rates)
        .def_readwrite("latency_caps", &AllocationProblem::latency_caps);

    py::class_<AllocationSolution>(m, "AllocationSolution")
        .def_readonly("allocation", &AllocationSolution::allocation)
        .def_readonly("objective", &AllocationSolution::objective)
        .def_readonly("kkt_residual", &AllocationSolution::kkt_residual)
        .def_readonly("feasible", &AllocationSolution::feasible);

    py::class_<SwarmConfig>(m, "SwarmConfig")
        .def(py::init<>())
        .def_readwrite("particle_count", &SwarmConfig::particle_count)
        .def_readwrite("max_iterations", &SwarmConfig::max_iterations)
        .def_readwrite("cognitive_factor", &SwarmConfig::cognitive_factor)
        .def_readwrite("social_factor", &SwarmConfig::social_factor)
        .def_readwrite("inertia_max", &SwarmConfig::inertia_max)
        .def_readwrite("inertia_min", &SwarmConfig::inertia_min)
        .def_readwrite("penalty_latency", &SwarmConfig::penalty_latency)
        .def_readwrite("penalty_distance", &SwarmConfig::penalty_distance)
        .def_readwrite("region_half_width", &SwarmConfig::region_half_width)
        .def_readwrite("min_spacing", &SwarmConfig::min_spacing)
        .def_readwrite("velocity_clamp", &SwarmConfig::velocity_clamp)
        .def_readwrite("per_coordinate_random", &SwarmConfig::per_coordinate_random);

    py::enum_<RoundingMode>(m, "RoundingMode")
        .value("Continuous", RoundingMode::Continuous)
        .value("Threshold", RoundingMode::Threshold);
    py::enum_<InitialPositions>(m, "InitialPositions")
        .value("Random", InitialPositions::Random)
        .value("Reference", InitialPositions::Reference);

    py::class_<IppsoConfig>(m, "IppsoConfig")
        .def(py::init<>())
        .def_readwrite("outer_iterations", &IppsoConfig::outer_iterations)
        .def_readwrite("swarm", &IppsoConfig::swarm)
        .def_readwrite("allocation_tolerance", &IppsoConfig::allocation_tolerance)
        .def_readwrite("rounding", &IppsoConfig::rounding)
        .def_readwrite("rounding_threshold", &IppsoConfig::rounding_threshold)
        .def_readwrite("initial_positions", &IppsoConfig::initial_positions)
        .def_readwrite("rng_seed", &IppsoConfig::rng_seed)
        .def_readwrite("threads", &IppsoConfig::threads);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("antenna_count", &ScenarioConfig::antenna_count)
        .def_readwrite("user_count", &ScenarioConfig::user_count)
        .def_readwrite("paths_per_user", &ScenarioConfig::paths_per_user)
        .def_readwrite("wavelength", &ScenarioConfig::wavelength)
        .def_readwrite("region_half_width", &ScenarioConfig::region_half_width)
        .def_readwrite("min_spacing", &ScenarioConfig::min_spacing)
        .def_readwrite("server_max_frequency_hz", &ScenarioConfig::server_max_frequency_hz)
        .def_readwrite("bandwidth_hz", &ScenarioConfig::bandwidth_hz)
        .def_readwrite("pso_iterations", &ScenarioConfig::pso_iterations)
        .def_readwrite("particle_count", &ScenarioConfig::particle_count)
        .def_readwrite("outer_iterations", &ScenarioConfig::outer_iterations)
        .def_readwrite("rng_seed", &ScenarioConfig::rng_seed)
        .def("__eq__", [](const ScenarioConfig& a, const ScenarioConfig& b) { return a == b; });

    py::class_<ScenarioInstance>(m, "ScenarioInstance")
        .def_readonly("antenna_count", &ScenarioInstance::antenna_count)
        .def_readonly("users", &ScenarioInstance::users)
        .def_readonly("channel_specs", &ScenarioInstance::channel_specs)
        .def_readonly("server", &ScenarioInstance::server)
        .def_readonly("wavelength", &ScenarioInstance::wavelength)
        .def_readonly("noise_power", &ScenarioInstance::noise_power)
        .def_readonly("bandwidth", &ScenarioInstance::bandwidth)
        .def_readonly("reference_positions", &ScenarioInstance::reference_positions)
        .def_readonly("latency_caps", &ScenarioInstance::latency_caps);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("final_positions", &RunResult::final_positions)
        .def_readonly("final_allocation", &RunResult::final_allocation)
        .def_readonly("total_latency", &RunResult::total_latency)
        .def_readonly("per_user_latencies", &RunResult::per_user_latencies)
        .def_readonly("rates", &RunResult::rates)
        .def_readonly("outer_trace", &RunResult::outer_trace)
        .def_readonly("phase_objectives", &RunResult::phase_objectives)
        .def_readonly("offload_trace", &RunResult::offload_trace)
        .def_property_readonly("inner_fitness_traces",
                               [](const RunResult& r) {
                                   std::vector<std::vector<double>> out;
                                   for (const auto& t : r.inner_traces) out.push_back(t.global_best_fitness);
                                   return out;
                               })
        .def_readonly("allocation_feasible", &RunResult::allocation_feasible)
        .def_readonly("runtime_seconds", &RunResult::runtime_seconds);

    // channel model
    m.def("phase_difference", &phase_difference, py::arg("position"), py::arg("elevation"), py::arg("azimuth"));
    m.def("field_response_vector", &field_response_vector, py::arg("position"), py::arg("spec"),
          py::arg("wavelength"));
    m.def("channel_vector",
          [](const std::vector<PlanarPosition>& d, const UserChannelSpec& s, double wl) {
              return channel_vector(d, s, wl);
          },
          py::arg("positions"), py::arg("spec"), py::arg("wavelength"));
    m.def("zf_combining_matrix",
          [](const Eigen::MatrixXcd& h) { return zf_combining_matrix(ChannelMatrix{h, {}}).entries; },
          py::arg("channel"), "W = H (H^H H)^-1 for an M x N channel matrix.");
    m.def("per_user_rate",
          [](const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& w, std::size_t n, double p, double noise, double bw) {
              return per_user_rate(ChannelMatrix{h, {}}, CombiningMatrix{w}, n, p, noise, bw);
          },
          py::arg("channel"), py::arg("combiner"), py::arg("user_index"), py::arg("transmit_power"),
          py::arg("noise_power"), py::arg("bandwidth"));
    m.def("zf_rates",
          [](const std::vector<PlanarPosition>& d, const std::vector<UserChannelSpec>& users, double wl, double noise,
             double bw) { return zf_rates(d, users, wl, noise, bw); },
          py::arg("positions"), py::arg("users"), py::arg("wavelength"), py::arg("noise_power"),
          py::arg("bandwidth"));

    // latency model
    m.def("local_latency", &local_latency, py::arg("user"));
    m.def("upload_latency", &upload_latency, py::arg("user"), py::arg("rate"));
    m.def("offload_transfer_latency", &offload_transfer_latency, py::arg("user"), py::arg("rate"));
    m.def("server_exec_latency", &server_exec_latency, py::arg("user"), py::arg("server"), py::arg("f_server"));
    m.def("user_total_latency", &user_total_latency, py::arg("user"), py::arg("server"), py::arg("beta"),
          py::arg("f_server"), py::arg("rate"));
    m.def("system_total_latency",
          [](const std::vector<UserProfile>& users, const ServerProfile& server, const AllocationState& a,
             const std::vector<double>& rates) { return system_total_latency(users, server, a, rates); },
          py::arg("users"), py::arg("server"), py::arg("allocation"), py::arg("rates"));

    // allocation
    m.def("solve_allocation", &solve_allocation, py::arg("problem"), py::arg("tolerance") = 1e-9);
    m.def("threshold_round", &threshold_round, py::arg("problem"), py::arg("allocation"),
          py::arg("threshold") = 0.5);
    m.def("kkt_residual", &kkt_residual, py::arg("problem"), py::arg("allocation"));

    // antenna placement
    m.def("penalty",
          [](const std::vector<PlanarPosition>& d, const std::vector<double>& t, const std::vector<double>& caps,
             const SwarmConfig& c) { return penalty(d, t, caps, c); },
          py::arg("positions"), py::arg("per_user_latencies"), py::arg("latency_caps"), py::arg("config"));
    m.def("reference_array", &reference_array, py::arg("antenna_count"), py::arg("spacing"), py::arg("half_width"));

    // scenarios and runs
    m.def("dbm_to_watts", &dbm_to_watts, py::arg("value_dbm"));
    m.def("sample_scenario", &sample_scenario, py::arg("config"), py::arg("seed"));
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("serialize_config", &serialize_config, py::arg("config"));
    m.def("make_ippso_config", &make_ippso_config, py::arg("config"), py::arg("threads") = 1);
    m.def("run_ippso", &run_ippso, py::arg("scenario"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_baseline_local_only", &run_baseline_local_only, py::arg("scenario"));
    m.def("run_baseline_fixed_antenna", &run_baseline_fixed_antenna, py::arg("scenario"), py::arg("config"));

    m.def("validate",
          [](std::uint64_t seed) {
              py::list out;
              for (const auto& r : validation::run_all_checks(seed)) {
                  py::dict d;
                  d["name"] = r.name;
                  d["passed"] = r.passed;
                  d["measured"] = r.measured;
                  d["threshold"] = r.threshold;
                  out.append(d);
              }
              return out;
          },
          py::arg("seed") = 1, "Runs the oracle and invariant checks; returns one dict per check.");

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
