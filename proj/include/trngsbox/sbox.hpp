#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace trngsbox {

inline constexpr std::size_t kSBoxSize = 256;

using SBoxTable = std::array<std::uint8_t, kSBoxSize>;

/// Bijective 8-bit substitution box. Immutable after construction; the only
/// way to build one is through validating factories, so every instance is a
/// permutation of 0..255.
class SBox {
 public:
  /// Throws WrongLength or NotBijective.
  static SBox from_bytes(std::span<const std::uint8_t> raw);
  static SBox identity();

  std::uint8_t operator()(std::uint8_t x) const noexcept { return table_[x]; }
  std::uint8_t operator[](std::size_t x) const noexcept { return table_[x]; }
  const SBoxTable& table() const noexcept { return table_; }
  std::span<const std::uint8_t> bytes() const noexcept { return table_; }

  friend bool operator==(const SBox&, const SBox&) = default;

 private:
  explicit SBox(const SBoxTable& table) : table_(table) {}
  SBoxTable table_{};
};

/// r[s[x]] = x. Row/column walk over the 16x16 layout is equivalent to a flat
/// index inversion since value = row * 16 + col.
SBox reverse_sbox(const SBox& s);

/// SHA3-256 over the 256 table bytes in index order.
struct SBoxDigest {
  std::array<std::uint8_t, 32> bytes{};

  std::string hex() const;
  friend auto operator<=>(const SBoxDigest&, const SBoxDigest&) = default;
};

SBoxDigest canonical_digest(const SBox& s);
SBoxDigest sha3_256(std::span<const std::uint8_t> data);

struct SBoxDigestHash {
  std::size_t operator()(const SBoxDigest& d) const noexcept;
};

enum class SBoxFormat { grid16, hex_line };

std::string serialize(const SBox& s, SBoxFormat format = SBoxFormat::grid16);

/// Accepts either layout (a single 512-hex-character token selects hex_line).
/// Throws ParseError with row/column position, or NotBijective.
SBox parse_sbox(std::string_view text);

SBox read_sbox_file(const std::string& path);
void write_sbox_file(const std::string& path, const SBox& s, SBoxFormat format = SBoxFormat::grid16);

}  // namespace trngsbox
