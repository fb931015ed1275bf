#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trngsbox/bitstream.hpp"
#include "trngsbox/image.hpp"
#include "trngsbox/sbox.hpp"

namespace trngsbox::spn {

inline constexpr std::size_t kRounds = 16;

using BytePlane = std::vector<std::uint8_t>;

/// Per-round keys, S-boxes and P-boxes for one channel length.
///
/// A P-box is a permutation of the 8 * channel_len bit positions of a plane
/// (bit index = byte * 8 + bit, MSB first): bit i of the input lands at
/// position pboxes[r][i] of the output.
struct RoundMaterial {
  std::size_t channel_len = 0;
  std::vector<SBox> sboxes;                     // kRounds
  std::vector<std::vector<std::uint32_t>> pboxes;  // kRounds x 8 * channel_len
  std::vector<BytePlane> keys;                  // kRounds x channel_len

  /// Throws LengthMismatch / InvalidConfig if any part is inconsistent.
  void validate() const;

  /// Identity S-boxes, identity P-boxes, all-zero keys.
  static RoundMaterial identity(std::size_t channel_len);
};

/// Bits needed by derive_material for a channel length.
std::size_t material_bits_required(std::size_t channel_len);

/// Keys are raw bytes read from the stream; each P-box is a Fisher-Yates
/// shuffle seeded by the next 64 bits. S-boxes are drawn round-robin from
/// `pool`, or constructed from `bits` by random walk when the pool is empty.
RoundMaterial derive_material(const BitStream& bits, std::size_t channel_len,
                              std::span<const SBox> pool = {});

BytePlane encrypt_channel(std::span<const std::uint8_t> plain, const RoundMaterial& m);
BytePlane decrypt_channel(std::span<const std::uint8_t> cipher, const RoundMaterial& m);

ImageBuffer encrypt_image(const ImageBuffer& img, const RoundMaterial& m);
ImageBuffer decrypt_image(const ImageBuffer& img, const RoundMaterial& m);

using ChannelScores = std::array<double, 3>;

/// Percent of positions whose values differ, per channel.
ChannelScores npcr(const ImageBuffer& a, const ImageBuffer& b);
/// 100 * sum |a - b| / (255 * W * H), per channel.
ChannelScores uaci(const ImageBuffer& a, const ImageBuffer& b);

struct Sensitivity {
  ChannelScores npcr{};
  ChannelScores uaci{};
};

/// Encrypts `img` and a twin whose pixel `pixel` has the low bit of every
/// channel flipped, then compares the two ciphertexts.
Sensitivity sensitivity(const ImageBuffer& img, const RoundMaterial& m, std::size_t pixel = 0);

std::string serialize_material(const RoundMaterial& m);
RoundMaterial parse_material(std::string_view text);
RoundMaterial read_material_file(const std::string& path);
void write_material_file(const std::string& path, const RoundMaterial& m);

}  // namespace trngsbox::spn
