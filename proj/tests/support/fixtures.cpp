#include "fixtures.hpp"

#include <cmath>

namespace trngsbox::testing {

BitStream splitmix_bits(std::uint64_t seed, std::size_t n) {
  SplitMix64 rng(seed);
  BitStream out;
  out.bits.reserve(n + 64);
  while (out.bits.size() < n) {
    auto v = rng.next();
    for (int i = 63; i >= 0; --i) out.bits.push_back(static_cast<std::uint8_t>((v >> i) & 1U));
  }
  out.bits.resize(n);
  return out;
}

std::vector<entropy::StrikeRecord> synthetic_ldar(std::uint64_t seed, std::size_t count) {
  SplitMix64 rng(seed);
  std::vector<entropy::StrikeRecord> out;
  out.reserve(count);
  std::uint64_t micros = 0;
  for (std::size_t i = 0; i < count; ++i) {
    micros += 1 + rng.below(20000);
    const std::uint64_t total_seconds = micros / 1'000'000;
    entropy::StrikeRecord r;
    r.day = static_cast<int>(1 + (total_seconds / 86400) % 28);
    r.hour = static_cast<int>((total_seconds / 3600) % 24);
    r.minute = static_cast<int>((total_seconds / 60) % 60);
    r.second = static_cast<int>(total_seconds % 60);
    r.microsecond = static_cast<int>(micros % 1'000'000);
    r.east_m = static_cast<std::int64_t>(rng.below(100'001)) - 50'000;
    r.north_m = static_cast<std::int64_t>(rng.below(100'001)) - 50'000;
    r.alt_m = static_cast<std::int64_t>(rng.below(20'001));
    out.push_back(r);
  }
  return out;
}

BitStream whitened_fixture(std::uint64_t seed, std::size_t n_bits) {
  // Von Neumann keeps about a quarter of the raw bits; 24 raw bits per record.
  std::size_t records = n_bits / 6 + 64;
  for (;;) {
    auto ldar = synthetic_ldar(seed, records);
    auto white = entropy::von_neumann(entropy::strike_diff_bits(ldar));
    if (white.size() >= n_bits) {
      white.bits.resize(n_bits);
      return white;
    }
    records = records + records / 4;
  }
}

std::vector<std::uint8_t> random_permutation(std::size_t n, SplitMix64& rng) {
  std::vector<std::uint8_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(i);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
  return p;
}

SBox random_sbox(SplitMix64& rng) { return SBox::from_bytes(random_permutation(256, rng)); }

spn::ImageBuffer fixture_image(std::size_t width, std::size_t height) {
  auto img = spn::ImageBuffer::blank(width, height);
  const double cx = static_cast<double>(width) / 2.0, cy = static_cast<double>(height) / 2.0;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const auto i = y * width + x;
      const double dx = static_cast<double>(x) - cx, dy = static_cast<double>(y) - cy;
      const bool disc = dx * dx + dy * dy < cx * cy / 2.0;
      img.channels[0][i] = static_cast<std::uint8_t>(disc ? 200 : (x * 255) / (width ? width : 1));
      img.channels[1][i] = static_cast<std::uint8_t>((y * 255) / (height ? height : 1));
      img.channels[2][i] = static_cast<std::uint8_t>(disc ? 40 : 128 + 60 * std::sin(static_cast<double>(x + y) / 5.0));
    }
  }
  return img;
}

spn::ImageBuffer random_image(std::size_t width, std::size_t height, SplitMix64& rng) {
  auto img = spn::ImageBuffer::blank(width, height);
  for (auto& c : img.channels) {
    for (auto& v : c) v = static_cast<std::uint8_t>(rng.next() & 0xFF);
  }
  return img;
}

}  // namespace trngsbox::testing
