#pragma once

#include <cstdint>
#include <vector>

#include "trngsbox/bitstream.hpp"
#include "trngsbox/entropy.hpp"
#include "trngsbox/image.hpp"
#include "trngsbox/rng.hpp"
#include "trngsbox/sbox.hpp"

namespace trngsbox::testing {

/// Bits of successive SplitMix64 outputs, MSB first (mirrors the Python oracle).
BitStream splitmix_bits(std::uint64_t seed, std::size_t n);

/// Deterministic stand-in for an LDAR capture: timestamps advance, positions
/// scatter over a 100 km x 100 km x 20 km volume.
std::vector<entropy::StrikeRecord> synthetic_ldar(std::uint64_t seed, std::size_t count);

/// Runs synthetic LDAR through strike differencing and Von Neumann whitening
/// until `n_bits` whitened bits exist, then truncates to exactly n_bits.
BitStream whitened_fixture(std::uint64_t seed, std::size_t n_bits);

std::vector<std::uint8_t> random_permutation(std::size_t n, SplitMix64& rng);
SBox random_sbox(SplitMix64& rng);

/// Smooth gradient image with a few hard edges, like a small photo crop.
spn::ImageBuffer fixture_image(std::size_t width, std::size_t height);
spn::ImageBuffer random_image(std::size_t width, std::size_t height, SplitMix64& rng);

}  // namespace trngsbox::testing
