#pragma once

#include <cstdint>
#include <random>

namespace robustspline {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t z);

/// Seed for the stream identified by (master, stream, counter). Streams are
/// addressed by counter, never by draw order, so parallel runs reproduce
/// sequential ones.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t counter = 0);

inline Rng make_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t counter = 0)
{
    return Rng(derive_seed(master, stream, counter));
}

} // namespace robustspline
