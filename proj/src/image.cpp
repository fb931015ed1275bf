#include "trngsbox/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "trngsbox/error.hpp"

namespace trngsbox::spn {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

// Header tokens are separated by whitespace; '#' starts a comment to end of line.
std::size_t next_header_int(std::string_view data, std::size_t& pos) {
  while (pos < data.size()) {
    if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  std::size_t start = pos;
  std::size_t v = 0;
  while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
    v = v * 10 + static_cast<std::size_t>(data[pos] - '0');
    ++pos;
  }
  if (pos == start) throw Error(ErrorCode::ParseError, "malformed P6 header");
  return v;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

ImageBuffer ImageBuffer::blank(std::size_t width, std::size_t height, std::uint8_t fill) {
  ImageBuffer img;
  img.width = width;
  img.height = height;
  for (auto& c : img.channels) c.assign(width * height, fill);
  return img;
}

bool ImageBuffer::valid() const noexcept {
  for (const auto& c : channels) {
    if (c.size() != width * height) return false;
  }
  return width > 0 && height > 0;
}

ImageBuffer parse_ppm(std::string_view data) {
  if (data.size() < 2 || data[0] != 'P' || data[1] != '6') {
    throw Error(ErrorCode::ParseError, "not a binary P6 pixmap");
  }
  std::size_t pos = 2;
  const auto w = next_header_int(data, pos);
  const auto h = next_header_int(data, pos);
  const auto maxval = next_header_int(data, pos);
  if (maxval != 255) throw Error(ErrorCode::ParseError, "only maxval 255 is supported");
  if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos]))) {
    throw Error(ErrorCode::ParseError, "malformed P6 header");
  }
  ++pos;
  if (data.size() - pos < w * h * 3) throw Error(ErrorCode::ParseError, "truncated P6 pixel data");
  auto img = ImageBuffer::blank(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      img.channels[c][i] = static_cast<std::uint8_t>(data[pos + 3 * i + c]);
    }
  }
  return img;
}

std::string serialize_ppm(const ImageBuffer& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.pixels() * 3);
  for (std::size_t i = 0; i < img.pixels(); ++i) {
    for (const auto& c : img.channels) out.push_back(static_cast<char>(c[i]));
  }
  return out;
}

ImageBuffer read_ppm(const std::string& path) { return parse_ppm(slurp(path)); }
void write_ppm(const std::string& path, const ImageBuffer& img) { dump(path, serialize_ppm(img)); }

ImageBuffer read_raw_rgb(const std::string& path) {
  std::istringstream dims(slurp(path + ".dims"));
  std::size_t w = 0, h = 0;
  if (!(dims >> w >> h)) throw Error(ErrorCode::ParseError, "bad dimension sidecar for " + path);
  auto data = slurp(path);
  if (data.size() != w * h * 3) {
    throw Error(ErrorCode::DimensionMismatch, "raw RGB size does not match " + std::to_string(w) +
                                                  "x" + std::to_string(h));
  }
  auto img = ImageBuffer::blank(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    for (std::size_t c = 0; c < 3; ++c) img.channels[c][i] = static_cast<std::uint8_t>(data[3 * i + c]);
  }
  return img;
}

void write_raw_rgb(const std::string& path, const ImageBuffer& img) {
  std::string data;
  data.reserve(img.pixels() * 3);
  for (std::size_t i = 0; i < img.pixels(); ++i) {
    for (const auto& c : img.channels) data.push_back(static_cast<char>(c[i]));
  }
  dump(path, data);
  dump(path + ".dims", std::to_string(img.width) + " " + std::to_string(img.height) + "\n");
}

ImageBuffer read_image(const std::string& path) {
  return ends_with(path, ".ppm") ? read_ppm(path) : read_raw_rgb(path);
}

void write_image(const std::string& path, const ImageBuffer& img) {
  if (ends_with(path, ".ppm")) {
    write_ppm(path, img);
  } else {
    write_raw_rgb(path, img);
  }
}

}  // namespace trngsbox::spn
