#include "stego/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stego/density.hpp"
#include "stego/warden.hpp"

namespace stego {

Histogram::Histogram(double lo, double hi, std::vector<double> mass) : lo_(lo), hi_(hi), mass_(std::move(mass)) {
  if (!(hi_ > lo_) || !std::isfinite(lo_) || !std::isfinite(hi_))
    throw Error(ErrorKind::InvalidParameter, "histogram support needs finite hi > lo");
  if (mass_.size() < 2) throw Error(ErrorKind::InvalidParameter, "histogram needs at least 2 bins");
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw Error(ErrorKind::InvalidParameter, "negative or non-finite bin mass");
    total += m;
  }
  if (!(total > 0.0)) throw Error(ErrorKind::InvalidParameter, "histogram has no mass");
  for (double& m : mass_) m /= total;
}

std::vector<std::size_t> histogram_counts(std::span<const double> samples, double lo, double hi,
                                          std::size_t bins) {
  if (!(hi > lo) || bins < 2) throw Error(ErrorKind::InvalidParameter, "histogram needs hi > lo and >= 2 bins");
  std::vector<std::size_t> counts(bins, 0);
  const double scale = static_cast<double>(bins) / (hi - lo);
  for (double v : samples) {
    const double pos = std::floor((v - lo) * scale);
    std::size_t b = 0;
    if (pos >= static_cast<double>(bins)) b = bins - 1;
    else if (pos > 0.0) b = static_cast<std::size_t>(pos);
    ++counts[b];
  }
  return counts;
}

Histogram build_histogram(std::span<const double> samples, double lo, double hi, std::size_t bins) {
  if (samples.empty()) throw Error(ErrorKind::InvalidParameter, "histogram of no samples");
  const auto counts = histogram_counts(samples, lo, hi, bins);
  std::vector<double> mass(bins);
  const double n = static_cast<double>(samples.size());
  for (std::size_t b = 0; b < bins; ++b) mass[b] = static_cast<double>(counts[b]) / n;
  return Histogram(lo, hi, std::move(mass));
}

Histogram oracle_histogram(const std::function<double(double)>& pdf, double lo, double hi, std::size_t bins,
                           std::span<const double> breakpoints, std::size_t pieces_per_bin) {
  return Histogram(lo, hi, integrate_bins(pdf, lo, hi, bins, breakpoints, pieces_per_bin));
}

namespace {

void require_same_support(const Histogram& a, const Histogram& b) {
  if (a.bins() != b.bins() || a.lo() != b.lo() || a.hi() != b.hi())
    throw Error(ErrorKind::SupportMismatch, "histograms differ in support or bin count");
}

}  // namespace

double l1_distance(const Histogram& a, const Histogram& b) {
  require_same_support(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.bins(); ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

KldReport kld(const Histogram& stego, const Histogram& cover, double epsilon) {
  require_same_support(stego, cover);
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidParameter, "KLD smoothing constant must be positive");
  const double norm = 1.0 + static_cast<double>(stego.bins()) * epsilon;
  double acc = 0.0;
  for (std::size_t i = 0; i < stego.bins(); ++i) {
    const double p = (stego[i] + epsilon) / norm;
    const double q = (cover[i] + epsilon) / norm;
    acc += p * std::log2(p / q);
  }
  // Rounding can leave a -1e-17 residue for identical inputs.
  return KldReport{std::max(acc, 0.0), stego.bins(), epsilon};
}

double default_epsilon(std::size_t samples) { return 1.0 / (10.0 * static_cast<double>(samples)); }

KldReport kld_of_signals(std::span<const double> stego, std::span<const double> cover, double sigma_s) {
  const double lo = -kKldSupportSigmas * sigma_s;
  const double hi = kKldSupportSigmas * sigma_s;
  return kld(build_histogram(stego, lo, hi, kKldBins), build_histogram(cover, lo, hi, kKldBins),
             default_epsilon(cover.size()));
}

std::string_view to_string(CapacityMethod method) noexcept {
  return method == CapacityMethod::MutualInformation ? "mi" : "bsc";
}

double binary_entropy(double p) noexcept {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

namespace {

double entropy_bits(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double mutual_information_binary(std::span<const std::uint8_t> bits, std::span<const double> statistic,
                                 double lo, double hi, std::size_t bins) {
  if (bits.size() != statistic.size()) throw Error(ErrorKind::LengthMismatch, "one statistic per bit required");
  if (bits.empty()) throw Error(ErrorKind::InvalidParameter, "mutual information of no samples");
  if (!(hi > lo) || bins < 2) throw Error(ErrorKind::InvalidParameter, "MI binning needs hi > lo and >= 2 bins");
  std::vector<std::size_t> joint[2] = {std::vector<std::size_t>(bins, 0), std::vector<std::size_t>(bins, 0)};
  std::vector<std::size_t> marginal(bins, 0);
  const double scale = static_cast<double>(bins) / (hi - lo);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const double pos = std::floor((statistic[i] - lo) * scale);
    std::size_t b = 0;
    if (pos >= static_cast<double>(bins)) b = bins - 1;
    else if (pos > 0.0) b = static_cast<std::size_t>(pos);
    ++joint[bits[i] ? 1 : 0][b];
    ++marginal[b];
    ones += bits[i] ? 1 : 0;
  }
  const std::size_t n = bits.size();
  const double p1 = static_cast<double>(ones) / static_cast<double>(n);
  const double conditional = (1.0 - p1) * entropy_bits(joint[0], n - ones) + p1 * entropy_bits(joint[1], ones);
  return std::max(0.0, entropy_bits(marginal, n) - conditional);
}

StegoDensityModel stego_density_model(const SchemeSpec& spec, double lo, double hi) {
  const auto host = HostDensity::gaussian(spec.sigma_s);
  switch (spec.scheme) {
    case Scheme::Scs: {
      const auto p = scs_params(spec, Key{});
      return StegoDensityModel{[p, host](double x) { return scs_theoretical_pdf(x, p, host); },
                               scs_pdf_breakpoints(p, lo, hi)};
    }
    case Scheme::Tcq: {
      const auto p = tcq_params(spec);
      return StegoDensityModel{[p, host](double x) { return tcq_theoretical_pdf(x, p, host); }, {}};
    }
    case Scheme::StScs: {
      const auto p = stscs_params(spec, Key{});
      return StegoDensityModel{[p, host](double x) { return stscs_theoretical_pdf(x, p, host); }, {}};
    }
  }
  throw Error(ErrorKind::InvalidParameter, "unknown scheme");
}

ChannelRun run_channel(const SchemeSpec& spec, DbRatio wnr, std::size_t trials, Key key) {
  const std::size_t length = trials * spec.samples_per_bit();
  Signal host = gen_gaussian_host(length, spec.sigma_s, key);
  BitMessage message = BitMessage::random(trials, key);
  Signal stego = embed(spec, host, message, key);
  const double power = empirical_power(difference(stego.samples(), host.samples()));
  Signal received = power > 0.0 ? awgn_attack(stego, power, AttackParams{wnr, key}) : stego;
  return ChannelRun{std::move(host), std::move(message), std::move(stego), std::move(received), power};
}

CapacityEstimate estimate_capacity_mi(const SchemeSpec& spec, DbRatio wnr, std::size_t trials, Key key) {
  if (spec.scheme == Scheme::Tcq)
    throw Error(ErrorKind::InvalidParameter, "MI capacity needs a per-sample statistic (SCS or ST-SCS)");
  if (trials < kMinMiTrials)
    throw Error(ErrorKind::InsufficientTrials, "MI capacity needs >= " + std::to_string(kMinMiTrials) + " trials");
  const auto run = run_channel(spec, wnr, trials, key);
  const auto residual = decision_residuals(spec, run.received, key);
  const double half = 0.5 * decision_step(spec).value();
  const double mi = mutual_information_binary(run.message.bits(), residual, -half, half, kMiBins);

  std::size_t errors = 0;
  for (std::size_t i = 0; i < residual.size(); ++i)
    errors += (std::abs(residual[i]) < 0.5 * half ? 0 : 1) != run.message[i];
  const double per = static_cast<double>(spec.samples_per_bit());
  return CapacityEstimate{std::clamp(mi / per, 0.0, 1.0), CapacityMethod::MutualInformation, trials,
                          static_cast<double>(errors) / static_cast<double>(trials)};
}

CapacityEstimate estimate_capacity_ber(const SchemeSpec& spec, DbRatio wnr, std::size_t trials, Key key) {
  if (trials < kMinBerTrials)
    throw Error(ErrorKind::InsufficientTrials, "BER capacity needs >= " + std::to_string(kMinBerTrials) + " bits");
  const auto run = run_channel(spec, wnr, trials, key);
  const double ber = bit_error_rate(run.message, extract(spec, run.received, key));
  const double per = static_cast<double>(spec.samples_per_bit());
  return CapacityEstimate{std::clamp((1.0 - binary_entropy(ber)) / per, 0.0, 1.0), CapacityMethod::BscLowerBound,
                          trials, ber};
}

CapacityMethod default_capacity_method(Scheme scheme) noexcept {
  return scheme == Scheme::Tcq ? CapacityMethod::BscLowerBound : CapacityMethod::MutualInformation;
}

CapacityEstimate estimate_capacity(const SchemeSpec& spec, DbRatio wnr, std::size_t trials, Key key,
                                   CapacityMethod method) {
  return method == CapacityMethod::MutualInformation ? estimate_capacity_mi(spec, wnr, trials, key)
                                                     : estimate_capacity_ber(spec, wnr, trials, key);
}

AlphaChoice optimize_alpha(SchemeSpec spec, DbRatio wnr, std::span<const double> grid, std::size_t trials,
                           Key key, std::optional<CapacityMethod> method) {
  if (grid.empty()) throw Error(ErrorKind::InvalidParameter, "alpha grid is empty");
  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  const CapacityMethod how = method.value_or(default_capacity_method(spec.scheme));
  std::optional<AlphaChoice> best;
  for (double alpha : sorted) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidParameter, "alpha grid leaves (0, 1]");
    spec.alpha = alpha;
    const auto estimate = estimate_capacity(spec, wnr, trials, key, how);
    if (!best || estimate.bits_per_sample > best->capacity.bits_per_sample) best = AlphaChoice{alpha, estimate};
  }
  return *best;
}

KldReport stego_kld(const SchemeSpec& spec, std::size_t samples, Key key) {
  const std::size_t per = spec.samples_per_bit();
  if (samples < per) throw Error(ErrorKind::InvalidParameter, "too few samples for one block");
  const std::size_t length = samples - samples % per;
  const Signal host = gen_gaussian_host(length, spec.sigma_s, key);
  const BitMessage message = BitMessage::random(length / per, key);
  const Signal stego = embed(spec, host, message, key);
  return kld_of_signals(stego.samples(), host.samples(), spec.sigma_s);
}

KldReport kld_noise_floor(std::size_t samples, double sigma_s, Key key) {
  const Signal a = gen_gaussian_host(samples, sigma_s, key);
  const Signal b = gen_gaussian_host(samples, sigma_s, key.derive(0x686f7374));
  return kld_of_signals(b.samples(), a.samples(), sigma_s);
}

KldDerivative kld_derivative_alpha(SchemeSpec spec, double alpha, double step, std::size_t samples, Key key) {
  if (!(step > 0.0) || !(alpha - step > 0.0) || !(alpha + step < 1.0))
    throw Error(ErrorKind::InvalidParameter, "alpha +- step must stay inside (0, 1)");
  spec.alpha = alpha - step;
  const double minus = stego_kld(spec, samples, key).kld_bits;
  spec.alpha = alpha + step;
  const double plus = stego_kld(spec, samples, key).kld_bits;
  return KldDerivative{(plus - minus) / (2.0 * step), minus, plus};
}

}  // namespace stego
