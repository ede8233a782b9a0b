// SPDX-License-Identifier: Apache-2.0
#include "famec/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "famec/errors.hpp"

namespace famec {

void validate(const UserChannelSpec& spec)
{
    const auto l = spec.path_gains.size();
    if (l == 0 || spec.elevation_aoas.size() != l || spec.azimuth_aoas.size() != l) {
        throw ValidationError("UserChannelSpec: elevation, azimuth and gain lists must share a length >= 1");
    }
    if (!(spec.transmit_power > 0.0) || !(spec.distance_to_bs > 0.0)) {
        throw ValidationError("UserChannelSpec: transmit_power and distance_to_bs must be positive");
    }
}

double phase_difference(const PlanarPosition& position, double elevation, double azimuth)
{
    return position.x * std::sin(elevation) * std::cos(azimuth) + position.y * std::cos(elevation);
}

Eigen::VectorXcd field_response_vector(const PlanarPosition& position, const UserChannelSpec& spec,
                                       double wavelength)
{
    const double k = 2.0 * std::numbers::pi / wavelength;
    const auto l_count = static_cast<Eigen::Index>(spec.path_count());
    Eigen::VectorXcd f(l_count);
    for (Eigen::Index l = 0; l < l_count; ++l) {
        const auto i = static_cast<std::size_t>(l);
        f(l) = std::polar(1.0, k * phase_difference(position, spec.elevation_aoas[i], spec.azimuth_aoas[i]));
    }
    return f;
}

Eigen::VectorXcd channel_vector(std::span<const PlanarPosition> positions,
                                const UserChannelSpec& spec, double wavelength)
{
    const Eigen::Map<const Eigen::VectorXcd> gains(spec.path_gains.data(),
                                                   static_cast<Eigen::Index>(spec.path_gains.size()));
    Eigen::VectorXcd h(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t m = 0; m < positions.size(); ++m) {
        h(static_cast<Eigen::Index>(m)) = field_response_vector(positions[m], spec, wavelength).dot(gains);
    }
    return h;
}

ChannelMatrix channel_matrix(std::span<const PlanarPosition> positions,
                             std::span<const UserChannelSpec> users, double wavelength)
{
    ChannelMatrix out;
    out.antenna_positions.assign(positions.begin(), positions.end());
    out.entries.resize(static_cast<Eigen::Index>(positions.size()), static_cast<Eigen::Index>(users.size()));
    for (std::size_t n = 0; n < users.size(); ++n) {
        out.entries.col(static_cast<Eigen::Index>(n)) = channel_vector(positions, users[n], wavelength);
    }
    return out;
}

CombiningMatrix zf_combining_matrix(const ChannelMatrix& channel)
{
    const auto& h = channel.entries;
    if (h.cols() == 0 || h.rows() < h.cols()) {
        throw RankDeficientChannel("zero-forcing needs at least as many antennas as users (M="
                                   + std::to_string(h.rows()) + ", N=" + std::to_string(h.cols()) + ")");
    }
    const Eigen::MatrixXcd gram = h.adjoint() * h;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    const double largest = ev(ev.size() - 1);
    if (!(largest > 0.0) || !(ev(0) / largest >= kMinGramReciprocalCondition)) {
        throw RankDeficientChannel("channel Gram matrix is singular or ill-conditioned (rcond="
                                   + std::to_string(largest > 0.0 ? ev(0) / largest : 0.0) + ")");
    }
    const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    const Eigen::MatrixXcd gram_inv = llt.solve(Eigen::MatrixXcd::Identity(h.cols(), h.cols()));
    return CombiningMatrix{h * gram_inv};
}

double per_user_rate(const ChannelMatrix& /*channel*/, const CombiningMatrix& combiner,
                     std::size_t user_index, double transmit_power, double noise_power,
                     double bandwidth)
{
    const double w_norm2 = combiner.entries.col(static_cast<Eigen::Index>(user_index)).squaredNorm();
    return bandwidth * std::log2(1.0 + transmit_power / (w_norm2 * noise_power));
}

std::vector<double> zf_rates(std::span<const PlanarPosition> positions,
                             std::span<const UserChannelSpec> users, double wavelength,
                             double noise_power, double bandwidth)
{
    const auto h = channel_matrix(positions, users, wavelength);
    const auto w = zf_combining_matrix(h);
    std::vector<double> rates(users.size());
    for (std::size_t n = 0; n < users.size(); ++n) {
        rates[n] = per_user_rate(h, w, n, users[n].transmit_power, noise_power, bandwidth);
    }
    return rates;
}

} // namespace famec
