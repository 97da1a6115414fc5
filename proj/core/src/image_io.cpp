#include "stego/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace stego {

GrayImage::GrayImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> px)
    : width(w), height(h), pixels(std::move(px)) {
  if (width == 0 || height == 0) throw Error(ErrorKind::DimensionMismatch, "image dimensions must be positive");
  if (pixels.size() != width * height)
    throw Error(ErrorKind::DimensionMismatch, "pixel count does not match width x height");
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = static_cast<unsigned char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Unsigned decimal token; `what` names it in diagnostics.
  std::size_t number(const char* what, ErrorKind on_missing) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw Error(on_missing, std::string("missing ") + what);
    if (!std::isdigit(static_cast<unsigned char>(bytes_[pos_])))
      throw Error(ErrorKind::MalformedHeader, std::string("expected a number for ") + what);
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > (std::size_t{1} << 40)) throw Error(ErrorKind::MalformedHeader, std::string(what) + " is too large");
      ++pos_;
    }
    return value;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }
  char peek() const noexcept { return bytes_[pos_]; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw Error(ErrorKind::MalformedHeader, "not a P2/P5 PGM file");
  const bool binary = bytes[1] == '5';
  HeaderReader in(bytes);
  in.advance(2);
  if (!in.at_end() && !std::isspace(static_cast<unsigned char>(in.peek())) && in.peek() != '#')
    throw Error(ErrorKind::MalformedHeader, "magic number must be followed by whitespace");

  const std::size_t width = in.number("width", ErrorKind::MalformedHeader);
  const std::size_t height = in.number("height", ErrorKind::MalformedHeader);
  const std::size_t maxval = in.number("maxval", ErrorKind::MalformedHeader);
  if (width == 0 || height == 0) throw Error(ErrorKind::MalformedHeader, "zero image dimension");
  if (maxval == 0 || maxval > 255) throw Error(ErrorKind::UnsupportedMaxval, "maxval " + std::to_string(maxval));

  const std::size_t count = width * height;
  std::vector<std::uint8_t> pixels(count);
  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (in.at_end() || !std::isspace(static_cast<unsigned char>(in.peek())))
      throw Error(ErrorKind::MalformedHeader, "missing whitespace before raster");
    in.advance(1);
    if (bytes.size() - in.pos() < count)
      throw Error(ErrorKind::TruncatedPayload, "raster holds " + std::to_string(bytes.size() - in.pos()) +
                                                   " of " + std::to_string(count) + " bytes");
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = static_cast<std::uint8_t>(bytes[in.pos() + i]);
      if (v > maxval) throw Error(ErrorKind::MalformedHeader, "pixel exceeds maxval");
      pixels[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t v = in.number("pixel", ErrorKind::TruncatedPayload);
      if (v > maxval) throw Error(ErrorKind::MalformedHeader, "pixel exceeds maxval");
      pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return GrayImage(width, height, std::move(pixels));
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  try {
    return parse_pgm(buffer.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.message());
  }
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot write " + path.string());
  const auto bytes = encode_pgm(image);
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw Error(ErrorKind::Io, "short write to " + path.string());
}

CenteredSignal image_to_signal(const GrayImage& image) {
  if (image.pixels.empty()) throw Error(ErrorKind::DimensionMismatch, "empty image");
  double sum = 0.0;
  for (auto p : image.pixels) sum += p;
  const double mean = sum / static_cast<double>(image.pixels.size());
  std::vector<double> samples(image.pixels.size());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = static_cast<double>(image.pixels[i]) - mean;
  return CenteredSignal{Signal(std::move(samples)), mean};
}

GrayImage signal_to_image(const Signal& signal, std::size_t width, std::size_t height, double mean) {
  if (signal.size() != width * height)
    throw Error(ErrorKind::DimensionMismatch, "signal length does not match width x height");
  std::vector<std::uint8_t> pixels(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double v = std::nearbyint(std::clamp(signal[i] + mean, 0.0, 255.0));
    pixels[i] = static_cast<std::uint8_t>(v);
  }
  return GrayImage(width, height, std::move(pixels));
}

std::size_t clamped_pixel_count(const Signal& signal, double mean) {
  std::size_t n = 0;
  for (double v : signal) {
    const double r = std::nearbyint(v + mean);
    n += (r < 0.0 || r > 255.0) ? 1 : 0;
  }
  return n;
}

}  // namespace stego
