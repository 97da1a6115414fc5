#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "stego/experiments.hpp"

namespace stego {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error(ErrorKind::Io, "number formatting failed");
  return std::string(buf, ptr);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot write " + path.string());
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw Error(ErrorKind::Io, "short write to " + path.string());
}

void check_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw Error(ErrorKind::Validation, std::string("non-finite ") + field + " in record");
}

}  // namespace

std::string format_csv(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw Error(ErrorKind::Validation, "no records to write");
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    check_finite(r.alpha, "alpha");
    check_finite(r.dwr_db, "dwr_db");
    check_finite(r.wnr_db, "wnr_db");
    check_finite(r.kld_bits, "kld_bits");
    check_finite(r.capacity_bits, "capacity_bits");
    check_finite(r.ber, "ber");
    out += to_string(r.scheme);
    for (double v : {r.alpha, static_cast<double>(r.tau), r.dwr_db, r.wnr_db, r.kld_bits, r.capacity_bits}) {
      out += ',';
      out += format_number(v);
    }
    out += ',' + r.capacity_method + ',' + format_number(r.ber) + ',' + std::to_string(r.samples) + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

std::string format_density_csv(const std::vector<DensityRow>& rows) {
  std::string out = "scheme,alpha,tau,dwr_db,x,host_pdf,empirical_pdf,theoretical_pdf\n";
  for (const auto& r : rows) {
    out += to_string(r.scheme);
    for (double v : {r.alpha, static_cast<double>(r.tau), r.dwr_db, r.x, r.host_pdf, r.empirical_pdf,
                     r.theoretical_pdf}) {
      out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

std::string format_derivative_csv(const std::vector<DerivativeRow>& rows) {
  std::string out = "scheme,alpha,tau,dwr_db,kld_minus,kld_plus,dkld_dalpha,noise_floor\n";
  for (const auto& r : rows) {
    out += to_string(r.scheme);
    for (double v : {r.alpha, static_cast<double>(r.tau), r.dwr_db, r.kld_minus, r.kld_plus, r.dkld_dalpha,
                     r.noise_floor}) {
      out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path) {
  write_file(path, format_csv(records));
}

double record_column(const ExperimentRecord& r, std::string_view column) {
  if (column == "alpha") return r.alpha;
  if (column == "tau") return static_cast<double>(r.tau);
  if (column == "dwr_db") return r.dwr_db;
  if (column == "wnr_db") return r.wnr_db;
  if (column == "kld_bits") return r.kld_bits;
  if (column == "capacity_bits") return r.capacity_bits;
  if (column == "ber") return r.ber;
  throw Error(ErrorKind::Validation, "unknown plot column '" + std::string(column) + "'");
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 1) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << v;
  return o.str();
}

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  std::ostringstream o;
  if (a >= 1e4 || a < 1e-3) {
    o.setf(std::ios::scientific);
    o.precision(1);
  } else {
    o.precision(3);
  }
  o << v;
  return o.str();
}

// Series label from every identity column that varies across the records,
// except the x column.
std::string series_label(const ExperimentRecord& r, std::string_view x, const std::set<std::string>& varying) {
  std::string label(to_string(r.scheme));
  for (const char* col : {"alpha", "tau", "dwr_db", "wnr_db"}) {
    if (x == col || !varying.count(col)) continue;
    if (std::string_view(col) == "alpha" && r.capacity_method.find("optimized") != std::string::npos) continue;
    label += std::string(" ") + col + "=" + format_number(record_column(r, col));
  }
  if (varying.count("capacity_method")) label += " " + r.capacity_method;
  return label;
}

}  // namespace

std::string render_plot(const std::vector<ExperimentRecord>& records, std::string_view x_column,
                        std::string_view y_column, std::string_view title) {
  if (records.empty()) throw Error(ErrorKind::Validation, "no records to plot");

  std::set<std::string> varying;
  for (const char* col : {"alpha", "tau", "dwr_db", "wnr_db"}) {
    std::set<double> values;
    for (const auto& r : records) values.insert(record_column(r, col));
    if (values.size() > 1) varying.insert(col);
  }
  {
    std::set<std::string> methods;
    for (const auto& r : records) methods.insert(r.capacity_method);
    if (methods.size() > 1) varying.insert("capacity_method");
  }
  // Optimized-alpha rows share a series whatever alpha was chosen.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (const auto& r : records) {
    const auto label = series_label(r, x_column, varying);
    if (!series.count(label)) order.push_back(label);
    series[label].emplace_back(record_column(r, x_column), record_column(r, y_column));
  }

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  bool all_positive = true;
  for (auto& [_, pts] : series) {
    std::sort(pts.begin(), pts.end());
    for (auto [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
      all_positive = all_positive && y > 0.0;
    }
  }
  const bool log_y = all_positive && ymax / ymin > 100.0;
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  double y0 = ty(ymin), y1 = ty(ymax);
  if (xmax == xmin) { xmin -= 1.0; xmax += 1.0; }
  if (y1 == y0) { y0 -= log_y ? 0.5 : std::max(1e-3, std::abs(y0) * 0.1); y1 += log_y ? 0.5 : std::max(1e-3, std::abs(y1) * 0.1); }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double W = 720, H = 480, L = 80, R = 220, T = 40, B = 60;
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return T + ph - (ty(y) - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    svg << "<text x=\"" << L + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(title)
        << "</text>\n";
  svg << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double sx = px(xv);
    svg << "<line x1=\"" << fixed(sx) << "\" y1=\"" << T + ph << "\" x2=\"" << fixed(sx) << "\" y2=\"" << T + ph + 5
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(sx) << "\" y=\"" << T + ph + 20 << "\" text-anchor=\"middle\">" << tick_label(xv)
        << "</text>\n";
    const double yt = y0 + (y1 - y0) * k / 5.0;
    const double sy = T + ph - (yt - y0) / (y1 - y0) * ph;
    svg << "<line x1=\"" << L - 5 << "\" y1=\"" << fixed(sy) << "\" x2=\"" << L << "\" y2=\"" << fixed(sy)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << L - 8 << "\" y=\"" << fixed(sy + 4) << "\" text-anchor=\"end\">"
        << tick_label(log_y ? std::pow(10.0, yt) : yt) << "</text>\n";
  }
  svg << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << escape_xml(x_column)
      << "</text>\n";
  svg << "<text transform=\"translate(18," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape_xml(y_column) << (log_y ? " (log)" : "") << "</text>\n";

  std::size_t idx = 0;
  for (const auto& label : order) {
    const auto& pts = series[label];
    const char* colour = kPalette[idx % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : pts) svg << fixed(px(x), 2) << ',' << fixed(py(y), 2) << ' ';
    svg << "\"/>\n";
    for (auto [x, y] : pts)
      svg << "<circle cx=\"" << fixed(px(x), 2) << "\" cy=\"" << fixed(py(y), 2) << "\" r=\"2.5\" fill=\"" << colour
          << "\"/>\n";
    const double ly = T + 10 + 16.0 * static_cast<double>(idx);
    svg << "<line x1=\"" << L + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << L + pw + 35 << "\" y=\"" << ly + 4 << "\">" << escape_xml(label) << "</text>\n";
    ++idx;
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path,
               std::string_view x_column, std::string_view y_column, std::string_view title) {
  write_file(path, render_plot(records, x_column, y_column, title));
}

std::pair<std::string, std::string> default_plot_axes(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::Capacity:
      return spec.wnr_db.size() > 1 && spec.dwr_db.size() == 1 ? std::pair{"wnr_db", "capacity_bits"}
                                                               : std::pair{"kld_bits", "capacity_bits"};
    case ExperimentKind::Derivative: return {"alpha", "kld_bits"};
    case ExperimentKind::Density:
    case ExperimentKind::Kld:
    case ExperimentKind::Images:
      if (spec.dwr_db.size() > 1) return {"dwr_db", "kld_bits"};
      if (spec.tau.size() > 1 && spec.alpha.size() <= spec.tau.size()) return {"tau", "kld_bits"};
      return {"alpha", "kld_bits"};
  }
  return {"dwr_db", "kld_bits"};
}

std::vector<std::filesystem::path> write_outputs(const ExperimentSpec& spec, const ExperimentResult& result,
                                                 const std::filesystem::path& output, bool plot) {
  std::filesystem::path csv = output.empty() ? std::filesystem::path(spec.output) : output;
  if (csv.empty()) csv = spec.name + ".csv";
  // Render everything before touching the filesystem.
  const auto main = format_csv(result.records);
  std::vector<std::pair<std::filesystem::path, std::string>> files{{csv, main}};
  if (!result.density.empty())
    files.emplace_back(std::filesystem::path(csv).replace_extension(".density.csv"), format_density_csv(result.density));
  if (!result.derivative.empty())
    files.emplace_back(std::filesystem::path(csv).replace_extension(".derivative.csv"),
                       format_derivative_csv(result.derivative));
  if (plot) {
    const auto [x, y] = default_plot_axes(spec);
    files.emplace_back(std::filesystem::path(csv).replace_extension(".svg"), render_plot(result.records, x, y, spec.name));
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [path, text] : files) {
    write_file(path, text);
    written.push_back(path);
  }
  return written;
}

}  // namespace stego
