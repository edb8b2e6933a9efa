#pragma once

#include <cstdint>
#include <random>

namespace mad {

using Rng = std::mt19937_64;

/// Independent random streams derived from one master seed.
enum class SeedStream : std::uint64_t { Train = 0, Test = 1, Init = 2, Shuffle = 3 };

std::uint64_t splitmix64(std::uint64_t x);

/// Per-sample seed: a counter-based hash of (master, stream, index). Distinct
/// streams never share a derived seed for the same master unless the 64-bit
/// hash collides.
std::uint64_t derive_seed(std::uint64_t master, SeedStream stream, std::uint64_t index);

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

}  // namespace mad
