#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "reference_tables.hpp"
#include "trngsbox/error.hpp"
#include "trngsbox/spn.hpp"

using namespace trngsbox;
using namespace trngsbox::spn;

namespace {

std::vector<SBox> pool(std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<SBox> out;
  for (int i = 0; i < 16; ++i) out.push_back(testing::random_sbox(rng));
  return out;
}

RoundMaterial material_for(std::size_t len, std::uint64_t seed) {
  auto p = pool(seed);
  return derive_material(testing::splitmix_bits(seed, material_bits_required(len)), len, p);
}

}  // namespace

TEST_CASE("identity material is the identity map") {
  auto m = RoundMaterial::identity(8);
  m.validate();
  BytePlane p{0, 1, 2, 3, 250, 251, 252, 255};
  CHECK(encrypt_channel(p, m) == p);
  CHECK(decrypt_channel(p, m) == p);
  auto black = ImageBuffer::blank(1, 1);
  CHECK(encrypt_image(black, RoundMaterial::identity(1)) == black);
}

TEST_CASE("one substitution round is a table lookup") {
  auto m = RoundMaterial::identity(5);
  m.sboxes[0] = SBox::from_bytes(testdata::kSample1);
  BytePlane p{0, 1, 2, 100, 255};
  auto c = encrypt_channel(p, m);
  for (std::size_t j = 0; j < p.size(); ++j) CHECK(c[j] == testdata::kSample1[p[j]]);
  CHECK(decrypt_channel(c, m) == p);
}

TEST_CASE("derive_material") {
  auto m = material_for(4, 1);
  m.validate();
  REQUIRE(m.pboxes.size() == kRounds);
  for (const auto& pb : m.pboxes) {
    REQUIRE(pb.size() == 32);
    std::vector<std::uint32_t> inv(32, 99);
    for (std::uint32_t i = 0; i < 32; ++i) inv[pb[i]] = i;
    for (std::uint32_t i = 0; i < 32; ++i) CHECK(pb[inv[i]] == i);
  }
  CHECK(m.keys[0].size() == 4);
  auto again = material_for(4, 1);
  CHECK(serialize_material(m) == serialize_material(again));
  CHECK(serialize_material(m) != serialize_material(material_for(4, 2)));
  try {
    derive_material(testing::splitmix_bits(1, 100), 4, pool(1));
    FAIL("short stream accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientBits);
  }
}

TEST_CASE("material built by random walk when no pool is given") {
  auto bits = testing::whitened_fixture(8, 300000);
  auto m = derive_material(bits, 16);
  m.validate();
  CHECK(m.sboxes.size() == kRounds);
}

TEST_CASE("channel round-trip and length checks") {
  auto m = material_for(64, 3);
  SplitMix64 rng(3);
  BytePlane p(64);
  for (auto& v : p) v = static_cast<std::uint8_t>(rng.below(256));
  auto c = encrypt_channel(p, m);
  CHECK(c != p);
  CHECK(decrypt_channel(c, m) == p);
  BytePlane wrong(63);
  try {
    encrypt_channel(wrong, m);
    FAIL("length mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
  CHECK_THROWS_AS(decrypt_channel(wrong, m), Error);
}

TEST_CASE("image round-trip") {
  SplitMix64 rng(4);
  for (std::size_t w : {1u, 3u, 17u}) {
    auto img = testing::random_image(w, 5, rng);
    auto m = material_for(img.pixels(), w);
    CHECK(decrypt_image(encrypt_image(img, m), m) == img);
  }
}

TEST_CASE("npcr and uaci closed forms") {
  auto a = ImageBuffer::blank(4, 4, 128), b = ImageBuffer::blank(4, 4, 127);
  for (double v : npcr(a, a)) CHECK(v == 0.0);
  for (double v : uaci(a, a)) CHECK(v == 0.0);
  for (double v : npcr(a, b)) CHECK(v == doctest::Approx(100.0));
  for (double v : uaci(a, b)) CHECK(v == doctest::Approx(100.0 / 255.0));
  auto z = ImageBuffer::blank(4, 4, 0), f = ImageBuffer::blank(4, 4, 255);
  for (double v : uaci(z, f)) CHECK(v == doctest::Approx(100.0));
  SplitMix64 rng(5);
  auto x = testing::random_image(8, 8, rng), y = testing::random_image(8, 8, rng);
  CHECK(npcr(x, y) == npcr(y, x));
  CHECK(uaci(x, y) == uaci(y, x));
  try {
    npcr(a, ImageBuffer::blank(4, 5));
    FAIL("dimension mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("sensitivity of a 64x64 fixture") {
  auto img = testing::fixture_image(64, 64);
  auto m = material_for(img.pixels(), 6);
  auto s = sensitivity(img, m);
  for (int c = 0; c < 3; ++c) {
    CHECK(s.npcr[c] >= 99.0);
    CHECK(s.npcr[c] <= 100.0);
    CHECK(s.uaci[c] >= 30.0);
    CHECK(s.uaci[c] <= 36.0);
  }
}

TEST_CASE("material and image files") {
  auto dir = std::filesystem::temp_directory_path() / "trngsbox_spn_test";
  std::filesystem::create_directories(dir);
  auto m = material_for(12, 7);
  write_material_file((dir / "m.txt").string(), m);
  auto back = read_material_file((dir / "m.txt").string());
  CHECK(serialize_material(back) == serialize_material(m));
  CHECK_THROWS_AS(parse_material("trngsbox-material 1\nchannel_len 2\n"), Error);

  SplitMix64 rng(8);
  auto img = testing::random_image(4, 3, rng);
  write_image((dir / "a.ppm").string(), img);
  CHECK(read_image((dir / "a.ppm").string()) == img);
  write_image((dir / "a.rgb").string(), img);
  CHECK(read_image((dir / "a.rgb").string()) == img);
  CHECK(parse_ppm(serialize_ppm(img)) == img);
  CHECK_THROWS_AS(parse_ppm("P3\n1 1\n255\n"), Error);
  std::filesystem::remove_all(dir);
}
