#pragma once

#include <cstdint>
#include <random>

namespace geopth {

/// All randomness in the library flows through this engine. A build is
/// reproducible bit-for-bit for a fixed seed on the same implementation;
/// cross-implementation reproducibility is not guaranteed (std distributions
/// are implementation-defined).
using Rng = std::mt19937_64;

/// Deterministic sub-stream seed from (seed, stream). splitmix64 finalizer,
/// so consecutive stream ids give uncorrelated seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed) {
    return Rng(seed);
}

/// Uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace geopth
