#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "stego/scheme.hpp"
#include "stego/signal.hpp"

namespace stego {

/// Normalised bin masses over [lo, hi) with equal-width bins.
class Histogram {
 public:
  /// Normalises `mass` to sum 1; rejects negative or all-zero mass.
  Histogram(double lo, double hi, std::vector<double> mass);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::size_t bins() const noexcept { return mass_.size(); }
  double bin_width() const noexcept { return (hi_ - lo_) / static_cast<double>(mass_.size()); }
  double center(std::size_t b) const noexcept { return lo_ + (static_cast<double>(b) + 0.5) * bin_width(); }
  double operator[](std::size_t b) const noexcept { return mass_[b]; }
  std::span<const double> mass() const noexcept { return mass_; }
  /// Mass divided by bin width.
  double density(std::size_t b) const noexcept { return mass_[b] / bin_width(); }

 private:
  double lo_;
  double hi_;
  std::vector<double> mass_;
};

/// Samples outside [lo, hi) are counted in the edge bins.
Histogram build_histogram(std::span<const double> samples, double lo, double hi, std::size_t bins);

/// Raw per-bin counts with the same binning and clamping as build_histogram.
std::vector<std::size_t> histogram_counts(std::span<const double> samples, double lo, double hi,
                                          std::size_t bins);

/// Bin masses of an analytic density, integrated per bin (split at the
/// density's discontinuities) and renormalised over [lo, hi).
Histogram oracle_histogram(const std::function<double(double)>& pdf, double lo, double hi, std::size_t bins,
                           std::span<const double> breakpoints = {}, std::size_t pieces_per_bin = 2);

double l1_distance(const Histogram& a, const Histogram& b);

struct KldReport {
  double kld_bits;
  std::size_t bins;
  double epsilon;
};

/// D(stego || cover) in bits after adding epsilon to every bin and renormalising.
KldReport kld(const Histogram& stego, const Histogram& cover, double epsilon);

/// Smoothing constant 1 / (10 G).
double default_epsilon(std::size_t samples);

/// Common support for every KLD comparison: [-5 sigma_s, 5 sigma_s], 200 bins.
inline constexpr double kKldSupportSigmas = 5.0;
inline constexpr std::size_t kKldBins = 200;

KldReport kld_of_signals(std::span<const double> stego, std::span<const double> cover, double sigma_s);

/// Analytic stego density of a scheme on a Gaussian host, with its
/// discontinuities. The key is irrelevant to the density itself.
struct StegoDensityModel {
  std::function<double(double)> pdf;
  std::vector<double> breakpoints;
};

/// SCS and TCQ need alpha in (0, 1); ST-SCS also needs tau >= 2.
StegoDensityModel stego_density_model(const SchemeSpec& spec, double lo, double hi);

enum class CapacityMethod { MutualInformation, BscLowerBound };

std::string_view to_string(CapacityMethod method) noexcept;

struct CapacityEstimate {
  double bits_per_sample;
  CapacityMethod method;
  std::size_t trials;
  double ber;
};

double binary_entropy(double p) noexcept;

/// Plug-in estimate of I(M; V) in bits from a binary input and a scalar
/// statistic binned on [lo, hi) (clamped at the edges).
double mutual_information_binary(std::span<const std::uint8_t> bits, std::span<const double> statistic,
                                 double lo, double hi, std::size_t bins);

inline constexpr std::size_t kMiBins = 256;
inline constexpr std::size_t kMinMiTrials = 100000;
inline constexpr std::size_t kMinBerTrials = 10000;

/// Result of one embed -> measure -> attack pass.
struct ChannelRun {
  Signal host;
  BitMessage message;
  Signal stego;
  Signal received;
  double watermark_power;
};

/// Runs `trials` message bits through embedding and the AWGN warden. The
/// attack is calibrated on the measured watermark power.
ChannelRun run_channel(const SchemeSpec& spec, DbRatio wnr, std::size_t trials, Key key);

/// Monte-Carlo mutual information between message bits and the decision
/// residual, per host sample (divided by tau for ST-SCS). SCS and ST-SCS only.
CapacityEstimate estimate_capacity_mi(const SchemeSpec& spec, DbRatio wnr, std::size_t trials, Key key);

/// 1 - h2(BER) through embed -> attack -> extract, clamped to [0, 1] and
/// divided by tau for ST-SCS.
CapacityEstimate estimate_capacity_ber(const SchemeSpec& spec, DbRatio wnr, std::size_t trials, Key key);

CapacityMethod default_capacity_method(Scheme scheme) noexcept;

CapacityEstimate estimate_capacity(const SchemeSpec& spec, DbRatio wnr, std::size_t trials, Key key,
                                   CapacityMethod method);

struct AlphaChoice {
  double alpha;
  CapacityEstimate capacity;
};

/// Grid search for the capacity-maximising Costa factor. Ties go to the smaller alpha.
AlphaChoice optimize_alpha(SchemeSpec spec, DbRatio wnr, std::span<const double> grid, std::size_t trials,
                           Key key, std::optional<CapacityMethod> method = std::nullopt);

/// KLD between the stego signal and its own Gaussian host (G samples).
KldReport stego_kld(const SchemeSpec& spec, std::size_t samples, Key key);

/// KLD between two independent host draws: the finite-sample floor.
KldReport kld_noise_floor(std::size_t samples, double sigma_s, Key key);

struct KldDerivative {
  double derivative;
  double kld_minus;
  double kld_plus;
};

/// Central difference of stego_kld in alpha with common random numbers.
KldDerivative kld_derivative_alpha(SchemeSpec spec, double alpha, double step, std::size_t samples, Key key);

}  // namespace stego
