#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "stego/experiments.hpp"

namespace stego {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return items;
}

[[noreturn]] void bad(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::Validation, "line " + std::to_string(line) + ": " + message);
}

double to_double(std::string_view text, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) bad(line, "'" + std::string(text) + "' is not a number");
  return v;
}

std::uint64_t to_unsigned(std::string_view text, std::size_t line) {
  // Accept 1e6 style counts as long as they are whole.
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc{} && ptr == text.data() + text.size()) return v;
  const double d = to_double(text, line);
  if (!(d >= 0.0) || d != static_cast<double>(static_cast<std::uint64_t>(d)))
    bad(line, "'" + std::string(text) + "' is not a non-negative integer");
  return static_cast<std::uint64_t>(d);
}

// "lo:step:hi" expands inclusively; anything else is a comma list.
std::vector<double> to_doubles(std::string_view value, std::size_t line) {
  std::vector<double> out;
  for (auto item : split_list(value)) {
    const auto c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      out.push_back(to_double(item, line));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string_view::npos) bad(line, "range needs lo:step:hi");
    const double lo = to_double(trim(item.substr(0, c1)), line);
    const double step = to_double(trim(item.substr(c1 + 1, c2 - c1 - 1)), line);
    const double hi = to_double(trim(item.substr(c2 + 1)), line);
    if (!(step > 0.0) || hi < lo) bad(line, "range needs step > 0 and hi >= lo");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
  }
  return out;
}

}  // namespace

ExperimentSpec parse_spec_text(std::string_view text) {
  ExperimentSpec s;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>> entries;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view l = raw;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) bad(line, "expected key = value");
    const std::string key(trim(l.substr(0, eq)));
    const std::string value(trim(l.substr(eq + 1)));
    if (key.empty()) bad(line, "empty key");
    if (!seen.insert(key).second) bad(line, "duplicate key '" + key + "'");
    entries.push_back({key, {value, line}});
  }

  // A preset key seeds every other field from that preset.
  for (const auto& [key, v] : entries)
    if (key == "preset") {
      if (!is_preset(v.first)) bad(v.second, "unknown preset '" + v.first + "'");
      s = preset(v.first);
    }

  for (const auto& [key, v] : entries) {
    const auto& [value, at] = v;
    if (key == "preset") continue;
    if (key == "name") {
      s.name = value;
    } else if (key == "kind") {
      s.kind = parse_experiment_kind(value);
    } else if (key == "schemes") {
      s.schemes.clear();
      for (auto item : split_list(value)) s.schemes.push_back(parse_scheme(item));
    } else if (key == "alpha") {
      s.alpha = to_doubles(value, at);
    } else if (key == "alpha_search") {
      s.alpha_search = to_doubles(value, at);
    } else if (key == "tau") {
      s.tau.clear();
      for (auto item : split_list(value)) s.tau.push_back(static_cast<std::size_t>(to_unsigned(item, at)));
    } else if (key == "dwr_db") {
      s.dwr_db = to_doubles(value, at);
    } else if (key == "wnr_db") {
      s.wnr_db = to_doubles(value, at);
    } else if (key == "G") {
      s.samples = static_cast<std::size_t>(to_unsigned(value, at));
    } else if (key == "trials") {
      s.trials = static_cast<std::size_t>(to_unsigned(value, at));
    } else if (key == "seed") {
      s.seed = to_unsigned(value, at);
    } else if (key == "output") {
      s.output = value;
    } else if (key == "image_dir") {
      s.image_dir = value;
    } else if (key == "alpha_policy") {
      s.alpha_policy = parse_alpha_policy(value);
    } else if (key == "derivative_step") {
      s.derivative_step = to_double(value, at);
    } else if (key == "trellis_bits") {
      s.trellis_bits = static_cast<int>(to_unsigned(value, at));
    } else if (key == "dwr_reference") {
      if (value == "projected") s.dwr_reference = DwrReference::Projected;
      else if (value == "host") s.dwr_reference = DwrReference::Host;
      else bad(at, "dwr_reference must be projected or host");
    } else {
      bad(at, "unknown key '" + key + "'");
    }
  }
  return s;
}

ExperimentSpec load_spec_file(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorKind::Io, "cannot open spec file " + path.string());
  std::ostringstream text;
  text << file.rdbuf();
  try {
    auto spec = parse_spec_text(text.str());
    if (spec.name == "custom") spec.name = path.stem().string();
    return spec;
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.message());
  }
}

}  // namespace stego
