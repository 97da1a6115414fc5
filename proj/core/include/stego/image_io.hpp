#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stego/signal.hpp"

namespace stego {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Parses a P2 (ASCII) or P5 (binary) PGM with maxval <= 255. Header comments
/// run from '#' to end of line.
GrayImage parse_pgm(std::string_view bytes);
GrayImage load_pgm(const std::filesystem::path& path);

/// Binary P5 encoding with maxval 255.
std::string encode_pgm(const GrayImage& image);
void save_pgm(const std::filesystem::path& path, const GrayImage& image);

struct CenteredSignal {
  Signal signal;
  double mean;
};

/// Raster-order lift to reals with the pixel mean removed.
CenteredSignal image_to_signal(const GrayImage& image);

/// Adds the mean back, clamps to [0, 255] and rounds half-to-even.
GrayImage signal_to_image(const Signal& signal, std::size_t width, std::size_t height, double mean);

/// Count of samples that signal_to_image would clamp.
std::size_t clamped_pixel_count(const Signal& signal, double mean);

}  // namespace stego
