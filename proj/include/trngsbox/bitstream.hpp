#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trngsbox {

enum class BitOrigin { raw, whitened };

/// Ordered sequence of bits, one element per bit (each 0 or 1).
struct BitStream {
  std::vector<std::uint8_t> bits;
  BitOrigin origin = BitOrigin::raw;

  std::size_t size() const noexcept { return bits.size(); }
  bool empty() const noexcept { return bits.empty(); }

  void append_byte_msb_first(std::uint8_t value);

  /// Reads `width` bits starting at `offset` as an unsigned integer, MSB first.
  std::uint64_t read_uint(std::size_t offset, unsigned width) const;

  friend bool operator==(const BitStream&, const BitStream&) = default;
};

/// Builds a stream from a '0'/'1' string; any other character is ignored.
BitStream bits_from_string(std::string_view text, BitOrigin origin = BitOrigin::raw);
std::string bits_to_string(const BitStream& stream);

enum class BitFormat { ascii, packed };

// ASCII: '0'/'1' characters, 64 per line. Packed: "TRNGBITS" magic, one
// origin byte, bit count as little-endian u64, then MSB-first bytes.
std::string serialize_bits(const BitStream& stream, BitFormat format);
BitStream parse_bits(std::string_view data);

BitStream read_bits_file(const std::string& path);
void write_bits_file(const std::string& path, const BitStream& stream, BitFormat format);

}  // namespace trngsbox
