#include "trngsbox/sbox.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <vector>

#include "trngsbox/error.hpp"

namespace trngsbox {

SBox SBox::from_bytes(std::span<const std::uint8_t> raw) {
  if (raw.size() != kSBoxSize) {
    throw Error(ErrorCode::WrongLength,
                "S-box needs 256 entries, got " + std::to_string(raw.size()));
  }
  std::array<int, kSBoxSize> first_at;
  first_at.fill(-1);
  SBoxTable table{};
  for (std::size_t i = 0; i < kSBoxSize; ++i) {
    auto v = raw[i];
    if (first_at[v] >= 0) {
      throw Error(ErrorCode::NotBijective, "value " + std::to_string(v) + " appears at indices " +
                                               std::to_string(first_at[v]) + " and " +
                                               std::to_string(i));
    }
    first_at[v] = static_cast<int>(i);
    table[i] = v;
  }
  return SBox(table);
}

SBox SBox::identity() {
  SBoxTable t{};
  for (std::size_t i = 0; i < kSBoxSize; ++i) t[i] = static_cast<std::uint8_t>(i);
  return SBox(t);
}

SBox reverse_sbox(const SBox& s) {
  std::array<std::uint8_t, kSBoxSize> inv{};
  for (std::size_t row = 0; row < 16; ++row) {
    for (std::size_t col = 0; col < 16; ++col) {
      const auto v = s[row * 16 + col];
      const std::size_t row_is = v / 16;
      const std::size_t col_is = v % 16;
      inv[row_is * 16 + col_is] = static_cast<std::uint8_t>(row * 16 + col);
    }
  }
  return SBox::from_bytes(inv);
}

std::string SBoxDigest::hex() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

std::size_t SBoxDigestHash::operator()(const SBoxDigest& d) const noexcept {
  std::size_t h;
  std::memcpy(&h, d.bytes.data(), sizeof(h));
  return h;
}

SBoxDigest sha3_256(std::span<const std::uint8_t> data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  SBoxDigest d;
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha3_256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), d.bytes.data(), &len) != 1 || len != d.bytes.size()) {
    throw std::runtime_error("SHA3-256 digest failed");
  }
  return d;
}

SBoxDigest canonical_digest(const SBox& s) { return sha3_256(s.bytes()); }

std::string serialize(const SBox& s, SBoxFormat format) {
  std::ostringstream out;
  if (format == SBoxFormat::hex_line) {
    static constexpr char kHex[] = "0123456789abcdef";
    for (auto v : s.table()) out << kHex[v >> 4] << kHex[v & 0xF];
    out << '\n';
    return out.str();
  }
  for (std::size_t row = 0; row < 16; ++row) {
    for (std::size_t col = 0; col < 16; ++col) {
      if (col) out << ' ';
      out << static_cast<int>(s[row * 16 + col]);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::vector<std::string_view> tokens_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && sep(line[i])) ++i;
    auto start = i;
    while (i < line.size() && !sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

SBox parse_hex_line(std::string_view token) {
  std::array<std::uint8_t, kSBoxSize> raw{};
  for (std::size_t i = 0; i < kSBoxSize; ++i) {
    int hi = hex_value(token[2 * i]);
    int lo = hex_value(token[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::ParseError, "invalid hex digit at entry " + std::to_string(i));
    }
    raw[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return SBox::from_bytes(raw);
}

}  // namespace

SBox parse_sbox(std::string_view text) {
  std::vector<std::vector<std::string_view>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto toks = tokens_of(text.substr(pos, end - pos));
    if (!toks.empty() && toks.front().front() != '#') rows.push_back(std::move(toks));
    pos = end + 1;
  }
  if (rows.size() == 1 && rows[0].size() == 1 && rows[0][0].size() == 2 * kSBoxSize) {
    return parse_hex_line(rows[0][0]);
  }
  if (rows.size() != 16) {
    throw Error(ErrorCode::ParseError, "grid16 needs 16 rows, found " + std::to_string(rows.size()));
  }
  std::array<std::uint8_t, kSBoxSize> raw{};
  for (std::size_t r = 0; r < 16; ++r) {
    if (rows[r].size() != 16) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(r + 1) + " has " +
                                             std::to_string(rows[r].size()) + " values, expected 16");
    }
    for (std::size_t c = 0; c < 16; ++c) {
      auto tok = rows[r][c];
      int v = -1;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0 || v > 255) {
        throw Error(ErrorCode::ParseError, "row " + std::to_string(r + 1) + " column " +
                                               std::to_string(c + 1) + ": '" + std::string(tok) +
                                               "' is not a byte value");
      }
      raw[r * 16 + c] = static_cast<std::uint8_t>(v);
    }
  }
  return SBox::from_bytes(raw);
}

SBox read_sbox_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_sbox(text);
}

void write_sbox_file(const std::string& path, const SBox& s, SBoxFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << serialize(s, format);
}

}  // namespace trngsbox
