#include "trngsbox/bitstream.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "trngsbox/error.hpp"

namespace trngsbox {

namespace {

constexpr std::string_view kPackedMagic = "TRNGBITS";

}  // namespace

void BitStream::append_byte_msb_first(std::uint8_t value) {
  for (int b = 7; b >= 0; --b) {
    bits.push_back(static_cast<std::uint8_t>((value >> b) & 1U));
  }
}

std::uint64_t BitStream::read_uint(std::size_t offset, unsigned width) const {
  if (width > 64 || offset + width > bits.size()) {
    throw Error(ErrorCode::InsufficientBits,
                "read of " + std::to_string(width) + " bits at offset " +
                    std::to_string(offset) + " exceeds stream of " +
                    std::to_string(bits.size()));
  }
  std::uint64_t value = 0;
  for (unsigned i = 0; i < width; ++i) {
    value = (value << 1) | bits[offset + i];
  }
  return value;
}

BitStream bits_from_string(std::string_view text, BitOrigin origin) {
  BitStream out;
  out.origin = origin;
  out.bits.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') out.bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

std::string bits_to_string(const BitStream& stream) {
  std::string s;
  s.reserve(stream.size());
  for (auto b : stream.bits) s.push_back(b ? '1' : '0');
  return s;
}

std::string serialize_bits(const BitStream& stream, BitFormat format) {
  std::string out;
  if (format == BitFormat::ascii) {
    out.reserve(stream.size() + stream.size() / 64 + 1);
    for (std::size_t i = 0; i < stream.size(); ++i) {
      out.push_back(stream.bits[i] ? '1' : '0');
      if (i % 64 == 63) out.push_back('\n');
    }
    if (stream.size() % 64 != 0) out.push_back('\n');
    return out;
  }
  out.append(kPackedMagic);
  out.push_back(stream.origin == BitOrigin::whitened ? 'W' : 'R');
  std::uint64_t n = stream.size();
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((n >> (8 * i)) & 0xFF));
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    acc = static_cast<std::uint8_t>((acc << 1) | stream.bits[i]);
    if (i % 8 == 7) {
      out.push_back(static_cast<char>(acc));
      acc = 0;
    }
  }
  if (stream.size() % 8 != 0) {
    acc = static_cast<std::uint8_t>(acc << (8 - stream.size() % 8));
    out.push_back(static_cast<char>(acc));
  }
  return out;
}

BitStream parse_bits(std::string_view data) {
  if (data.substr(0, kPackedMagic.size()) != kPackedMagic) {
    for (char c : data) {
      if (c != '0' && c != '1' && c != '\n' && c != '\r' && c != ' ' && c != '\t') {
        throw Error(ErrorCode::ParseError, "bit file contains a character other than 0/1");
      }
    }
    return bits_from_string(data);
  }
  const std::size_t header = kPackedMagic.size() + 1 + 8;
  if (data.size() < header) throw Error(ErrorCode::ParseError, "truncated packed bit header");
  BitStream out;
  out.origin = data[kPackedMagic.size()] == 'W' ? BitOrigin::whitened : BitOrigin::raw;
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) {
    n |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[kPackedMagic.size() + 1 + i]))
         << (8 * i);
  }
  if (data.size() - header < (n + 7) / 8) {
    throw Error(ErrorCode::ParseError, "packed bit payload shorter than declared length");
  }
  out.bits.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto byte = static_cast<unsigned char>(data[header + i / 8]);
    out.bits.push_back(static_cast<std::uint8_t>((byte >> (7 - i % 8)) & 1U));
  }
  return out;
}

BitStream read_bits_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_bits(data);
}

void write_bits_file(const std::string& path, const BitStream& stream, BitFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  auto data = serialize_bits(stream, format);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

}  // namespace trngsbox
