// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "famec/geometry.hpp"

namespace famec {

using Complex = std::complex<double>;

/// One user's far-field multipath description: L paths with elevation and
/// azimuth angles of arrival and complex path coefficients at the reference
/// point (origin of the antenna region).
struct UserChannelSpec {
    std::vector<double> elevation_aoas;  // radians
    std::vector<double> azimuth_aoas;    // radians
    std::vector<Complex> path_gains;
    double transmit_power = 1.0;   // W
    double distance_to_bs = 50.0;  // m

    std::size_t path_count() const { return path_gains.size(); }
};

/// Checks the length/positivity invariants; throws ValidationError.
void validate(const UserChannelSpec& spec);

/// M x N multiple-access channel; column n is the channel vector of user n.
struct ChannelMatrix {
    Eigen::MatrixXcd entries;
    std::vector<PlanarPosition> antenna_positions;
};

/// M x N zero-forcing combiner, column n is w_n.
struct CombiningMatrix {
    Eigen::MatrixXcd entries;
};

/// Propagation distance difference of a path between `position` and the origin.
double phase_difference(const PlanarPosition& position, double elevation, double azimuth);

/// Unit-modulus phase term of every path of `spec` seen at `position`.
Eigen::VectorXcd field_response_vector(const PlanarPosition& position, const UserChannelSpec& spec,
                                       double wavelength);

/// h_n(d) = F_n(d)^H G_n, one entry per antenna.
Eigen::VectorXcd channel_vector(std::span<const PlanarPosition> positions,
                                const UserChannelSpec& spec, double wavelength);

ChannelMatrix channel_matrix(std::span<const PlanarPosition> positions,
                             std::span<const UserChannelSpec> users, double wavelength);

/// Users are declared inseparable below this reciprocal condition number of H^H H.
inline constexpr double kMinGramReciprocalCondition = 1e-10;

/// W = H (H^H H)^{-1}. Requires M >= N and full column rank, otherwise
/// throws RankDeficientChannel.
CombiningMatrix zf_combining_matrix(const ChannelMatrix& channel);

/// bandwidth * log2(1 + p_n / (||w_n||^2 sigma^2)). With a ZF combiner the
/// interference terms vanish so this is the full SINR rate.
double per_user_rate(const ChannelMatrix& channel, const CombiningMatrix& combiner,
                     std::size_t user_index, double transmit_power, double noise_power,
                     double bandwidth);

/// Convenience: ZF rates for every user at the given antenna positions.
std::vector<double> zf_rates(std::span<const PlanarPosition> positions,
                             std::span<const UserChannelSpec> users, double wavelength,
                             double noise_power, double bandwidth);

} // namespace famec
