// SPDX-License-Identifier: Apache-2.0
#include "famec/geometry.hpp"

#include <cmath>
#include <string>

#include "famec/errors.hpp"

namespace famec {

double distance(const PlanarPosition& a, const PlanarPosition& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<double> flatten(std::span<const PlanarPosition> positions)
{
    std::vector<double> out;
    out.reserve(2 * positions.size());
    for (const auto& p : positions) {
        out.push_back(p.x);
        out.push_back(p.y);
    }
    return out;
}

std::vector<PlanarPosition> unflatten(std::span<const double> coords)
{
    std::vector<PlanarPosition> out(coords.size() / 2);
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m] = {coords[2 * m], coords[2 * m + 1]};
    }
    return out;
}

std::vector<PlanarPosition> reference_array(std::size_t antenna_count, double spacing,
                                            double half_width)
{
    if (antenna_count == 0) {
        throw ScenarioInvalid("reference_array: antenna_count must be positive");
    }
    const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(antenna_count))));
    const auto rows = (antenna_count + cols - 1) / cols;
    const double x0 = -0.5 * spacing * static_cast<double>(cols - 1);
    const double y0 = -0.5 * spacing * static_cast<double>(rows - 1);
    // small slack so that e.g. 4 columns at d0 = lambda fit exactly in A = 1.5 lambda
    const double limit = half_width * (1.0 + 1e-12);
    if (-x0 > limit || -y0 > limit) {
        throw ScenarioInvalid("reference_array: " + std::to_string(rows) + "x" + std::to_string(cols)
                              + " grid with spacing " + std::to_string(spacing)
                              + " m does not fit in the antenna region");
    }
    std::vector<PlanarPosition> out;
    out.reserve(antenna_count);
    for (std::size_t r = 0; r < rows && out.size() < antenna_count; ++r) {
        for (std::size_t c = 0; c < cols && out.size() < antenna_count; ++c) {
            out.push_back({x0 + spacing * static_cast<double>(c), y0 + spacing * static_cast<double>(r)});
        }
    }
    return out;
}

std::size_t count_spacing_violations(std::span<const PlanarPosition> positions, double min_spacing)
{
    std::size_t count = 0;
    for (std::size_t m = 0; m + 1 < positions.size(); ++m) {
        for (std::size_t k = m + 1; k < positions.size(); ++k) {
            if (distance(positions[m], positions[k]) < min_spacing) {
                ++count;
            }
        }
    }
    return count;
}

} // namespace famec
