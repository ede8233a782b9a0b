// SPDX-License-Identifier: Apache-2.0
#include "famec/config_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "famec/errors.hpp"

namespace famec {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Field {
    std::function<void(ScenarioConfig&, std::string_view)> read;
    std::function<std::string(const ScenarioConfig&)> write;
};

double to_double(std::string_view text)
{
    // from_chars does not accept a leading '+'
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw std::invalid_argument("expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

std::uint64_t to_unsigned(std::string_view text)
{
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw std::invalid_argument("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return value;
}

std::vector<double> to_list(std::string_view text)
{
    std::vector<double> out;
    if (trim(text).empty()) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(to_double(trim(text.substr(start, comma - start))));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

bool to_bool(std::string_view text)
{
    if (text == "true") return true;
    if (text == "false") return false;
    throw std::invalid_argument("expected true or false, got '" + std::string(text) + "'");
}

std::string list_text(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? ", " : "") + format_double(values[i]);
    }
    return out;
}

template <class Member>
Field real(Member member)
{
    return {[member](ScenarioConfig& c, std::string_view v) { c.*member = to_double(v); },
            [member](const ScenarioConfig& c) { return format_double(c.*member); }};
}

template <class Member>
Field count(Member member)
{
    return {[member](ScenarioConfig& c, std::string_view v) { c.*member = static_cast<std::size_t>(to_unsigned(v)); },
            [member](const ScenarioConfig& c) { return std::to_string(c.*member); }};
}

template <class Member>
Field list(Member member)
{
    return {[member](ScenarioConfig& c, std::string_view v) { c.*member = to_list(v); },
            [member](const ScenarioConfig& c) { return list_text(c.*member); }};
}

// Ordered so that serialize_config groups related keys.
const std::vector<std::pair<std::string, Field>>& fields()
{
    using C = ScenarioConfig;
    static const std::vector<std::pair<std::string, Field>> table{
        {"antenna_count", count(&C::antenna_count)},
        {"user_count", count(&C::user_count)},
        {"paths_per_user", count(&C::paths_per_user)},
        {"wavelength_m", real(&C::wavelength)},
        {"region_half_width_m", real(&C::region_half_width)},
        {"min_spacing_m", real(&C::min_spacing)},
        {"data_size_min_kb", real(&C::data_size_min_kb)},
        {"data_size_max_kb", real(&C::data_size_max_kb)},
        {"local_cpu_min_hz", real(&C::local_cpu_min_hz)},
        {"local_cpu_max_hz", real(&C::local_cpu_max_hz)},
        {"aoa_min_rad", real(&C::aoa_min)},
        {"aoa_max_rad", real(&C::aoa_max)},
        {"user_distance_min_m", real(&C::user_distance_min)},
        {"user_distance_max_m", real(&C::user_distance_max)},
        {"reference_gain_db", real(&C::reference_gain_db)},
        {"path_loss_exponent", real(&C::path_loss_exponent)},
        {"server_max_frequency_hz", real(&C::server_max_frequency_hz)},
        {"transmit_power_dbm", real(&C::transmit_power_dbm)},
        {"transmit_power_dbm_per_user", list(&C::transmit_power_dbm_per_user)},
        {"noise_psd_dbm_per_hz", real(&C::noise_psd_dbm_per_hz)},
        {"bandwidth_hz", real(&C::bandwidth_hz)},
        {"latency_caps_s", list(&C::latency_caps_s)},
        {"model_size_factor", real(&C::model_size_factor)},
        {"user_cycles_per_bit", real(&C::user_cycles_per_bit)},
        {"server_cycles_per_bit", real(&C::server_cycles_per_bit)},
        {"user_minibatch_ratio", real(&C::user_minibatch_ratio)},
        {"server_minibatch_ratio", real(&C::server_minibatch_ratio)},
        {"user_iterations", real(&C::user_iterations)},
        {"server_iterations", real(&C::server_iterations)},
        {"particle_count", count(&C::particle_count)},
        {"pso_iterations", count(&C::pso_iterations)},
        {"cognitive_factor", real(&C::cognitive_factor)},
        {"social_factor", real(&C::social_factor)},
        {"inertia_max", real(&C::inertia_max)},
        {"inertia_min", real(&C::inertia_min)},
        {"penalty_latency", real(&C::penalty_latency)},
        {"penalty_distance", real(&C::penalty_distance)},
        {"velocity_clamp_m",
         {[](C& c, std::string_view v) {
              if (v == "auto") {
                  c.velocity_clamp.reset();
              } else {
                  c.velocity_clamp = to_double(v);
              }
          },
          [](const C& c) { return c.velocity_clamp ? format_double(*c.velocity_clamp) : std::string("auto"); }}},
        {"per_coordinate_random",
         {[](C& c, std::string_view v) { c.per_coordinate_random = to_bool(v); },
          [](const C& c) { return std::string(c.per_coordinate_random ? "true" : "false"); }}},
        {"outer_iterations", count(&C::outer_iterations)},
        {"allocation_tolerance", real(&C::allocation_tolerance)},
        {"rounding",
         {[](C& c, std::string_view v) {
              if (v == "continuous") {
                  c.rounding = RoundingMode::Continuous;
              } else if (v == "threshold") {
                  c.rounding = RoundingMode::Threshold;
              } else {
                  throw std::invalid_argument("expected continuous or threshold, got '" + std::string(v) + "'");
              }
          },
          [](const C& c) { return std::string(c.rounding == RoundingMode::Threshold ? "threshold" : "continuous"); }}},
        {"rounding_threshold", real(&C::rounding_threshold)},
        {"initial_positions",
         {[](C& c, std::string_view v) {
              if (v == "random") {
                  c.initial_positions = InitialPositions::Random;
              } else if (v == "reference") {
                  c.initial_positions = InitialPositions::Reference;
              } else {
                  throw std::invalid_argument("expected random or reference, got '" + std::string(v) + "'");
              }
          },
          [](const C& c) {
              return std::string(c.initial_positions == InitialPositions::Reference ? "reference" : "random");
          }}},
        {"rng_seed",
         {[](C& c, std::string_view v) { c.rng_seed = to_unsigned(v); },
          [](const C& c) { return std::to_string(c.rng_seed); }}},
    };
    return table;
}

const Field* find_field(std::string_view key)
{
    for (const auto& [name, field] : fields()) {
        if (name == key) {
            return &field;
        }
    }
    return nullptr;
}

} // namespace

std::string format_double(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

ScenarioConfig parse_config(std::string_view text)
{
    ScenarioConfig config;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto newline = text.find('\n', start);
        auto line = text.substr(start, newline == std::string_view::npos ? std::string_view::npos : newline - start);
        start = newline == std::string_view::npos ? text.size() + 1 : newline + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto where = "line " + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(where + ": expected 'key = value', got '" + std::string(line) + "'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto* field = find_field(key);
        if (field == nullptr) {
            throw ParseError(where + ": unknown key '" + std::string(key) + "'");
        }
        if (!seen.insert(std::string(key)).second) {
            throw ParseError(where + ": key '" + std::string(key) + "' given more than once");
        }
        try {
            field->read(config, value);
        } catch (const std::invalid_argument& e) {
            throw ParseError(where + ": key '" + std::string(key) + "': " + e.what());
        }
    }
    validate(config);
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string serialize_config(const ScenarioConfig& config)
{
    std::string out;
    for (const auto& [name, field] : fields()) {
        out += name + " = " + field.write(config) + "\n";
    }
    return out;
}

} // namespace famec
