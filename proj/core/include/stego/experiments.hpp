#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stego/analysis.hpp"
#include "stego/scheme.hpp"

namespace stego {

/// What is measured at each grid point.
///   density    - KLD plus binned host/stego/oracle densities
///   kld        - KLD only
///   capacity   - capacity under the warden, plus KLD at the alpha used
///   derivative - KLD and its central difference in alpha
///   images     - KLD over a directory of PGM covers
enum class ExperimentKind { Density, Kld, Capacity, Derivative, Images };

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view name);

/// fixed: every alpha in the grid. optimized: best alpha per point. both: each.
enum class AlphaPolicy { Fixed, Optimized, Both };

std::string_view to_string(AlphaPolicy policy) noexcept;
AlphaPolicy parse_alpha_policy(std::string_view name);

struct ExperimentSpec {
  std::string name = "custom";
  ExperimentKind kind = ExperimentKind::Kld;
  std::vector<Scheme> schemes;
  std::vector<double> alpha;
  std::vector<std::size_t> tau;  // ST-SCS only; other schemes report tau = 1
  std::vector<double> dwr_db;
  std::vector<double> wnr_db;    // capacity runs only
  std::size_t samples = 1000000; // G, host samples for KLD and densities
  std::size_t trials = 100000;   // message bits for capacity
  std::uint64_t seed = 1;
  std::string output;
  std::string image_dir;
  AlphaPolicy alpha_policy = AlphaPolicy::Fixed;
  std::vector<double> alpha_search;  // grid for the optimized policy
  double derivative_step = 0.05;
  int trellis_bits = 6;
  DwrReference dwr_reference = DwrReference::Projected;

  /// Throws Validation on empty grids or out-of-range values.
  void validate() const;
};

/// One CSV row.
struct ExperimentRecord {
  Scheme scheme;
  double alpha;
  std::size_t tau;
  double dwr_db;
  double wnr_db;
  double kld_bits;
  double capacity_bits;
  std::string capacity_method;
  double ber;
  std::size_t samples;
  std::size_t trials;
  std::uint64_t seed;
};

struct DensityRow {
  Scheme scheme;
  double alpha;
  std::size_t tau;
  double dwr_db;
  double x;
  double host_pdf;
  double empirical_pdf;
  double theoretical_pdf;
};

struct DerivativeRow {
  Scheme scheme;
  double alpha;
  std::size_t tau;
  double dwr_db;
  double kld_minus;
  double kld_plus;
  double dkld_dalpha;
  double noise_floor;
};

struct ExperimentResult {
  std::vector<ExperimentRecord> records;
  std::vector<DensityRow> density;
  std::vector<DerivativeRow> derivative;
};

std::vector<std::string> preset_names();
bool is_preset(std::string_view name);
ExperimentSpec preset(std::string_view name);

/// Flat `key = value` text; `#` starts a comment, lists are comma separated.
ExperimentSpec parse_spec_text(std::string_view text);
ExperimentSpec load_spec_file(const std::filesystem::path& path);

/// Runs the full cartesian sweep on `jobs` workers. Output order is the grid
/// order whatever the completion order.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned jobs = 1);

inline constexpr std::string_view kCsvHeader =
    "scheme,alpha,tau,dwr_db,wnr_db,kld_bits,capacity_bits,capacity_method,ber,G,trials,seed";

/// Shortest round-trip decimal form.
std::string format_number(double value);

std::string format_csv(const std::vector<ExperimentRecord>& records);
std::string format_density_csv(const std::vector<DensityRow>& rows);
std::string format_derivative_csv(const std::vector<DerivativeRow>& rows);

void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path);

/// Columns available to plots: alpha, tau, dwr_db, wnr_db, kld_bits, capacity_bits, ber.
double record_column(const ExperimentRecord& record, std::string_view column);

/// SVG line chart of y against x, one series per (scheme, tau, capacity_method)
/// and per value of every other varying grid column.
std::string render_plot(const std::vector<ExperimentRecord>& records, std::string_view x_column,
                        std::string_view y_column, std::string_view title = {});
void emit_plot(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path,
               std::string_view x_column, std::string_view y_column, std::string_view title = {});

/// Default plot axes for a run kind.
std::pair<std::string, std::string> default_plot_axes(const ExperimentSpec& spec);

/// Writes CSV, side CSVs and the SVG next to spec.output (or `output`).
std::vector<std::filesystem::path> write_outputs(const ExperimentSpec& spec, const ExperimentResult& result,
                                                 const std::filesystem::path& output, bool plot);

}  // namespace stego
