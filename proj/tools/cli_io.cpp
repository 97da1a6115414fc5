#include "cli_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "stego/experiments.hpp"

namespace stego::cli {

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream text;
  text << file.rdbuf();
  return text.str();
}

void dump(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot write " + path.string());
  file << text;
  if (!file) throw Error(ErrorKind::Io, "short write to " + path.string());
}

}  // namespace

Signal read_signal(const std::filesystem::path& path) {
  const auto text = slurp(path);
  std::vector<double> samples;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
      throw Error(ErrorKind::Validation, path.string() + ":" + std::to_string(n) + ": not a number");
    samples.push_back(v);
  }
  if (samples.empty()) throw Error(ErrorKind::Validation, path.string() + ": no samples");
  return Signal(std::move(samples));
}

void write_signal(const std::filesystem::path& path, const Signal& signal) {
  std::string text;
  text.reserve(signal.size() * 20);
  for (double v : signal) {
    text += format_number(v);
    text += '\n';
  }
  dump(path, text);
}

BitMessage read_bits(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bits;
  for (char c : slurp(path)) {
    if (c == '0' || c == '1') bits.push_back(static_cast<std::uint8_t>(c - '0'));
    else if (!std::isspace(static_cast<unsigned char>(c)))
      throw Error(ErrorKind::Validation, path.string() + ": bit files hold only 0 and 1");
  }
  return BitMessage(std::move(bits));
}

void write_bits(const std::filesystem::path& path, const BitMessage& bits) {
  std::string text;
  text.reserve(bits.size() + bits.size() / 64 + 1);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    text += static_cast<char>('0' + bits[i]);
    if (i % 64 == 63) text += '\n';
  }
  if (text.empty() || text.back() != '\n') text += '\n';
  dump(path, text);
}

bool is_pgm_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm";
}

}  // namespace stego::cli
