#include "trngsbox/spn.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "trngsbox/error.hpp"
#include "trngsbox/rng.hpp"
#include "trngsbox/walker.hpp"

namespace trngsbox::spn {

namespace {

constexpr std::string_view kMaterialMagic = "trngsbox-material 1";

std::vector<std::uint32_t> identity_permutation(std::size_t n) {
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0U);
  return p;
}

bool is_permutation(const std::vector<std::uint32_t>& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

void permute_bits(const BytePlane& in, BytePlane& out, const std::vector<std::uint32_t>& pbox) {
  std::fill(out.begin(), out.end(), 0);
  for (std::size_t i = 0; i < pbox.size(); ++i) {
    if ((in[i >> 3] >> (7 - (i & 7))) & 1U) {
      const auto d = pbox[i];
      out[d >> 3] = static_cast<std::uint8_t>(out[d >> 3] | (0x80U >> (d & 7)));
    }
  }
}

void unpermute_bits(const BytePlane& in, BytePlane& out, const std::vector<std::uint32_t>& pbox) {
  std::fill(out.begin(), out.end(), 0);
  for (std::size_t i = 0; i < pbox.size(); ++i) {
    const auto s = pbox[i];
    if ((in[s >> 3] >> (7 - (s & 7))) & 1U) {
      out[i >> 3] = static_cast<std::uint8_t>(out[i >> 3] | (0x80U >> (i & 7)));
    }
  }
}

void check_dims(const ImageBuffer& a, const ImageBuffer& b) {
  if (a.width != b.width || a.height != b.height || !a.valid() || !b.valid()) {
    throw Error(ErrorCode::DimensionMismatch, "images differ in size or are malformed");
  }
}

}  // namespace

void RoundMaterial::validate() const {
  if (sboxes.size() != kRounds || pboxes.size() != kRounds || keys.size() != kRounds) {
    throw Error(ErrorCode::InvalidConfig, "material needs 16 S-boxes, P-boxes and keys");
  }
  for (std::size_t r = 0; r < kRounds; ++r) {
    if (keys[r].size() != channel_len) {
      throw Error(ErrorCode::LengthMismatch, "round " + std::to_string(r) + " key has " +
                                                 std::to_string(keys[r].size()) + " bytes, channel has " +
                                                 std::to_string(channel_len));
    }
    if (pboxes[r].size() != 8 * channel_len || !is_permutation(pboxes[r])) {
      throw Error(ErrorCode::LengthMismatch,
                  "round " + std::to_string(r) + " P-box is not a permutation of the channel bits");
    }
  }
}

RoundMaterial RoundMaterial::identity(std::size_t channel_len) {
  RoundMaterial m;
  m.channel_len = channel_len;
  m.sboxes.assign(kRounds, SBox::identity());
  m.pboxes.assign(kRounds, identity_permutation(8 * channel_len));
  m.keys.assign(kRounds, BytePlane(channel_len, 0));
  return m;
}

std::size_t material_bits_required(std::size_t channel_len) {
  return kRounds * (8 * channel_len + 64);
}

RoundMaterial derive_material(const BitStream& bits, std::size_t channel_len,
                              std::span<const SBox> pool) {
  if (channel_len == 0) throw Error(ErrorCode::InvalidConfig, "channel length must be positive");
  const auto needed = material_bits_required(channel_len);
  if (bits.size() < needed) {
    throw Error(ErrorCode::InsufficientBits, "material for channel length " +
                                                 std::to_string(channel_len) + " needs " +
                                                 std::to_string(needed) + " bits, got " +
                                                 std::to_string(bits.size()));
  }
  RoundMaterial m;
  m.channel_len = channel_len;
  std::size_t cursor = 0;
  for (std::size_t r = 0; r < kRounds; ++r) {
    BytePlane key(channel_len);
    for (auto& b : key) {
      b = static_cast<std::uint8_t>(bits.read_uint(cursor, 8));
      cursor += 8;
    }
    m.keys.push_back(std::move(key));
  }
  for (std::size_t r = 0; r < kRounds; ++r) {
    SplitMix64 rng(bits.read_uint(cursor, 64));
    cursor += 64;
    auto p = identity_permutation(8 * channel_len);
    for (std::size_t i = p.size() - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
    m.pboxes.push_back(std::move(p));
  }
  if (pool.empty()) {
    auto built = walker::construct_sboxes(bits, kRounds, {.keep_traces = false});
    m.sboxes = std::move(built.sboxes);
  } else {
    for (std::size_t r = 0; r < kRounds; ++r) m.sboxes.push_back(pool[r % pool.size()]);
  }
  return m;
}

BytePlane encrypt_channel(std::span<const std::uint8_t> plain, const RoundMaterial& m) {
  if (plain.size() != m.channel_len) {
    throw Error(ErrorCode::LengthMismatch, "plane has " + std::to_string(plain.size()) +
                                               " bytes, material expects " +
                                               std::to_string(m.channel_len));
  }
  BytePlane state(plain.begin(), plain.end());
  BytePlane scratch(state.size());
  for (std::size_t r = 0; r < kRounds; ++r) {
    const auto& key = m.keys[r];
    const auto& box = m.sboxes[r];
    for (std::size_t j = 0; j < state.size(); ++j) state[j] = box(static_cast<std::uint8_t>(state[j] ^ key[j]));
    permute_bits(state, scratch, m.pboxes[r]);
    state.swap(scratch);
  }
  return state;
}

BytePlane decrypt_channel(std::span<const std::uint8_t> cipher, const RoundMaterial& m) {
  if (cipher.size() != m.channel_len) {
    throw Error(ErrorCode::LengthMismatch, "plane has " + std::to_string(cipher.size()) +
                                               " bytes, material expects " +
                                               std::to_string(m.channel_len));
  }
  BytePlane state(cipher.begin(), cipher.end());
  BytePlane scratch(state.size());
  for (std::size_t r = kRounds; r-- > 0;) {
    unpermute_bits(state, scratch, m.pboxes[r]);
    state.swap(scratch);
    const auto inverse = reverse_sbox(m.sboxes[r]);
    const auto& key = m.keys[r];
    for (std::size_t j = 0; j < state.size(); ++j) state[j] = static_cast<std::uint8_t>(inverse(state[j]) ^ key[j]);
  }
  return state;
}

ImageBuffer encrypt_image(const ImageBuffer& img, const RoundMaterial& m) {
  ImageBuffer out = img;
  for (std::size_t c = 0; c < 3; ++c) out.channels[c] = encrypt_channel(img.channels[c], m);
  return out;
}

ImageBuffer decrypt_image(const ImageBuffer& img, const RoundMaterial& m) {
  ImageBuffer out = img;
  for (std::size_t c = 0; c < 3; ++c) out.channels[c] = decrypt_channel(img.channels[c], m);
  return out;
}

ChannelScores npcr(const ImageBuffer& a, const ImageBuffer& b) {
  check_dims(a, b);
  ChannelScores s{};
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.pixels(); ++i) diff += a.channels[c][i] != b.channels[c][i];
    s[c] = 100.0 * static_cast<double>(diff) / static_cast<double>(a.pixels());
  }
  return s;
}

ChannelScores uaci(const ImageBuffer& a, const ImageBuffer& b) {
  check_dims(a, b);
  ChannelScores s{};
  for (std::size_t c = 0; c < 3; ++c) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < a.pixels(); ++i) {
      sum += static_cast<std::uint64_t>(std::abs(int{a.channels[c][i]} - int{b.channels[c][i]}));
    }
    s[c] = 100.0 * static_cast<double>(sum) / (255.0 * static_cast<double>(a.pixels()));
  }
  return s;
}

Sensitivity sensitivity(const ImageBuffer& img, const RoundMaterial& m, std::size_t pixel) {
  if (pixel >= img.pixels()) throw Error(ErrorCode::DimensionMismatch, "pixel index outside image");
  ImageBuffer twin = img;
  for (auto& c : twin.channels) c[pixel] ^= 1U;
  const auto c1 = encrypt_image(img, m);
  const auto c2 = encrypt_image(twin, m);
  return {npcr(c1, c2), uaci(c1, c2)};
}

std::string serialize_material(const RoundMaterial& m) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::ostringstream out;
  out << kMaterialMagic << '\n' << "channel_len " << m.channel_len << '\n';
  for (std::size_t r = 0; r < m.sboxes.size(); ++r) out << "sbox " << r << '\n' << serialize(m.sboxes[r]);
  for (std::size_t r = 0; r < m.pboxes.size(); ++r) {
    out << "pbox " << r << '\n';
    for (std::size_t i = 0; i < m.pboxes[r].size(); ++i) out << (i ? " " : "") << m.pboxes[r][i];
    out << '\n';
  }
  for (std::size_t r = 0; r < m.keys.size(); ++r) {
    out << "key " << r << '\n';
    for (auto b : m.keys[r]) out << kHex[b >> 4] << kHex[b & 0xF];
    out << '\n';
  }
  return out.str();
}

RoundMaterial parse_material(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  std::size_t li = 0;
  auto expect_line = [&](const std::string& what) -> std::string_view {
    if (li >= lines.size()) throw Error(ErrorCode::ParseError, "material truncated before " + what);
    return lines[li++];
  };
  auto expect_header = [&](const std::string& header) {
    auto line = expect_line(header);
    if (line != header) {
      throw Error(ErrorCode::ParseError, "material line " + std::to_string(li) + ": expected '" +
                                             header + "'");
    }
  };
  expect_header(std::string(kMaterialMagic));
  auto len_line = expect_line("channel_len");
  RoundMaterial m;
  {
    constexpr std::string_view key = "channel_len ";
    if (len_line.substr(0, key.size()) != key) throw Error(ErrorCode::ParseError, "missing channel_len");
    auto num = len_line.substr(key.size());
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), m.channel_len);
    if (ec != std::errc()) throw Error(ErrorCode::ParseError, "bad channel_len");
  }
  for (std::size_t r = 0; r < kRounds; ++r) {
    expect_header("sbox " + std::to_string(r));
    std::string grid;
    for (int row = 0; row < 16; ++row) {
      grid.append(expect_line("sbox row"));
      grid.push_back('\n');
    }
    m.sboxes.push_back(parse_sbox(grid));
  }
  for (std::size_t r = 0; r < kRounds; ++r) {
    expect_header("pbox " + std::to_string(r));
    auto line = expect_line("pbox values");
    std::vector<std::uint32_t> p;
    p.reserve(8 * m.channel_len);
    const char* cur = line.data();
    const char* end = line.data() + line.size();
    while (cur < end) {
      while (cur < end && *cur == ' ') ++cur;
      if (cur == end) break;
      std::uint32_t v = 0;
      auto [next, ec] = std::from_chars(cur, end, v);
      if (ec != std::errc()) throw Error(ErrorCode::ParseError, "bad value in pbox " + std::to_string(r));
      p.push_back(v);
      cur = next;
    }
    m.pboxes.push_back(std::move(p));
  }
  for (std::size_t r = 0; r < kRounds; ++r) {
    expect_header("key " + std::to_string(r));
    auto line = expect_line("key bytes");
    if (line.size() % 2 != 0) throw Error(ErrorCode::ParseError, "odd-length hex key " + std::to_string(r));
    BytePlane key(line.size() / 2);
    for (std::size_t i = 0; i < key.size(); ++i) {
      unsigned v = 0;
      auto [p, ec] = std::from_chars(line.data() + 2 * i, line.data() + 2 * i + 2, v, 16);
      if (ec != std::errc() || p != line.data() + 2 * i + 2) {
        throw Error(ErrorCode::ParseError, "bad hex in key " + std::to_string(r));
      }
      key[i] = static_cast<std::uint8_t>(v);
    }
    m.keys.push_back(std::move(key));
  }
  m.validate();
  return m;
}

RoundMaterial read_material_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_material(text);
}

void write_material_file(const std::string& path, const RoundMaterial& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << serialize_material(m);
}

}  // namespace trngsbox::spn
