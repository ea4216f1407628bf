#pragma once

#include <cstdint>
#include <random>

#include "mmwce/types.hpp"

namespace mmwce {

using Rng = std::mt19937_64;

// Purpose tags keep the streams of one trial disjoint.
enum class StreamTag : std::uint64_t {
  kPaths = 1,
  kUplinkNoise = 2,
  kDownlink = 3,
};

// Counter-based stream derivation: the stream depends only on the key, never
// on how many draws other trials made. This is what makes serial and
// parallel sweeps agree bit for bit.
std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0, std::uint64_t d = 0);

Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t trial,
                std::uint64_t snr_index = 0, std::uint64_t sub = 0);

// Circularly-symmetric complex Gaussian sample with E|z|^2 = variance.
cdouble complex_gaussian(Rng& rng, double variance);

}  // namespace mmwce
