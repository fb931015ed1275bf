#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace trngsbox::spn {

/// Planar RGB image.
struct ImageBuffer {
  std::size_t width = 0;
  std::size_t height = 0;
  std::array<std::vector<std::uint8_t>, 3> channels;  // R, G, B

  static ImageBuffer blank(std::size_t width, std::size_t height, std::uint8_t fill = 0);
  std::size_t pixels() const noexcept { return width * height; }
  bool valid() const noexcept;

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;
};

/// Binary portable pixmap (P6, maxval 255).
ImageBuffer parse_ppm(std::string_view data);
std::string serialize_ppm(const ImageBuffer& img);
ImageBuffer read_ppm(const std::string& path);
void write_ppm(const std::string& path, const ImageBuffer& img);

/// Interleaved RGB bytes; dimensions live in a "<path>.dims" sidecar ("W H").
ImageBuffer read_raw_rgb(const std::string& path);
void write_raw_rgb(const std::string& path, const ImageBuffer& img);

/// Dispatches on extension: ".ppm" is P6, anything else raw RGB + sidecar.
ImageBuffer read_image(const std::string& path);
void write_image(const std::string& path, const ImageBuffer& img);

}  // namespace trngsbox::spn
