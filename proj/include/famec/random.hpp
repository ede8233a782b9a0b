// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace famec {

using RandomEngine = std::mt19937_64;

/// Independent engine for (seed, stream tag, a, b). Every consumer of
/// randomness gets its own substream so results do not depend on
/// evaluation order or thread count.
inline RandomEngine substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0, std::uint64_t b = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(a),
                      static_cast<std::uint32_t>(a >> 32U), static_cast<std::uint32_t>(b),
                      static_cast<std::uint32_t>(b >> 32U)};
    return RandomEngine(seq);
}

namespace stream {
inline constexpr std::uint64_t kScenario = 1;
inline constexpr std::uint64_t kSwarmInit = 2;
inline constexpr std::uint64_t kSwarmUpdate = 3;
inline constexpr std::uint64_t kAntennaInit = 4;
} // namespace stream

} // namespace famec
