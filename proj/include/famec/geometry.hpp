// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace famec {

/// Receive-antenna coordinates in meters, relative to the region center.
struct PlanarPosition {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PlanarPosition&, const PlanarPosition&) = default;
};

double distance(const PlanarPosition& a, const PlanarPosition& b);

/// Interleaved layout x_1, y_1, ..., x_M, y_M used by the swarm.
std::vector<double> flatten(std::span<const PlanarPosition> positions);
std::vector<PlanarPosition> unflatten(std::span<const double> coords);

/// Fixed antenna array used by the baselines: a row-major grid with spacing
/// `spacing`, ceil(sqrt(M)) columns, centered on the origin. Throws
/// ScenarioInvalid if the grid does not fit in [-half_width, half_width]^2.
std::vector<PlanarPosition> reference_array(std::size_t antenna_count, double spacing,
                                            double half_width);

/// Number of unordered pairs strictly closer than `min_spacing`.
std::size_t count_spacing_violations(std::span<const PlanarPosition> positions,
                                     double min_spacing);

} // namespace famec
