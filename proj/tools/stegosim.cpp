// stegosim: embed, extract, attack, analyze and run experiment sweeps.

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "cli_io.hpp"
#include "stego/analysis.hpp"
#include "stego/experiments.hpp"
#include "stego/image_io.hpp"
#include "stego/warden.hpp"

namespace {

using namespace stego;

struct SchemeOptions {
  std::string scheme = "scs";
  double alpha = 0.3;
  double dwr_db = 13.0;
  std::size_t tau = 2;
  int trellis_bits = 6;
  std::optional<double> sigma;
  std::string dwr_reference = "projected";
};

void add_scheme_options(CLI::App* cmd, SchemeOptions& o) {
  cmd->add_option("--scheme", o.scheme, "scs, tcq or stscs")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Costa factor in (0, 1]")->capture_default_str();
  cmd->add_option("--dwr", o.dwr_db, "document-to-watermark ratio, dB")->capture_default_str();
  cmd->add_option("--tau", o.tau, "spreading factor (stscs)")->capture_default_str();
  cmd->add_option("--trellis-bits", o.trellis_bits, "trellis state bits (tcq)")->capture_default_str();
  cmd->add_option("--sigma", o.sigma,
                  "host standard deviation; default 1 for signal files, measured deviation for PGM images");
  cmd->add_option("--dwr-reference", o.dwr_reference, "projected or host (stscs)")
      ->check(CLI::IsMember({"projected", "host"}))
      ->capture_default_str();
}

SchemeSpec make_spec(const SchemeOptions& o, double sigma) {
  SchemeSpec s;
  s.scheme = parse_scheme(o.scheme);
  s.alpha = o.alpha;
  s.dwr = DbRatio{o.dwr_db};
  s.tau = s.scheme == Scheme::StScs ? o.tau : 1;
  s.trellis_bits = o.trellis_bits;
  s.sigma_s = sigma;
  s.dwr_reference = o.dwr_reference == "host" ? DwrReference::Host : DwrReference::Projected;
  return s;
}

// A signal plus what is needed to write it back as an image.
struct Loaded {
  Signal signal;
  std::optional<GrayImage> image;
  double mean = 0.0;
};

Loaded load_input(const std::string& path) {
  if (cli::is_pgm_path(path)) {
    auto img = load_pgm(path);
    auto centred = image_to_signal(img);
    return Loaded{std::move(centred.signal), std::move(img), centred.mean};
  }
  return Loaded{cli::read_signal(path), std::nullopt, 0.0};
}

void save_output(const std::string& path, const Signal& signal, const Loaded& like) {
  if (cli::is_pgm_path(path)) {
    if (!like.image) throw Error(ErrorKind::Validation, "PGM output needs a PGM input");
    const auto clamped = clamped_pixel_count(signal, like.mean);
    if (clamped > 0) std::cerr << "note: " << clamped << " pixels clamped to [0, 255]\n";
    save_pgm(path, signal_to_image(signal, like.image->width, like.image->height, like.mean));
  } else {
    cli::write_signal(path, signal);
  }
}

double sigma_for(const SchemeOptions& o, const Loaded& in) {
  if (o.sigma) return *o.sigma;
  return in.image ? std::sqrt(empirical_power(in.signal.samples())) : 1.0;
}

// Splits a signal into the part the scheme consumes and the untouched tail.
std::pair<Signal, std::vector<double>> split_blocks(const Signal& s, std::size_t per) {
  const std::size_t usable = s.size() - s.size() % per;
  if (usable == 0) throw Error(ErrorKind::LengthNotDivisible, "signal is shorter than one block");
  std::vector<double> head(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(usable));
  std::vector<double> tail(s.begin() + static_cast<std::ptrdiff_t>(usable), s.end());
  return {Signal(std::move(head)), std::move(tail)};
}

Signal join(const Signal& head, const std::vector<double>& tail) {
  std::vector<double> all(head.begin(), head.end());
  all.insert(all.end(), tail.begin(), tail.end());
  return Signal(std::move(all));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Costa-scheme steganography simulator (SCS, TCQ, ST-SCS)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "stegosim 0.1.0");

  std::uint64_t seed = 1;
  std::string output;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  // embed
  SchemeOptions embed_opts;
  std::string embed_in, message_in, message_out;
  std::size_t host_samples = 100000;
  auto* embed_cmd = app.add_subcommand("embed", "hide a message in a host signal or PGM image");
  add_scheme_options(embed_cmd, embed_opts);
  embed_cmd->add_option("--input,-i", embed_in, "host signal file or PGM; omitted: Gaussian host from the seed");
  embed_cmd->add_option("--samples", host_samples, "Gaussian host length when no input is given")->capture_default_str();
  embed_cmd->add_option("--message", message_in, "bit file; omitted: random bits from the seed")->check(CLI::ExistingFile);
  embed_cmd->add_option("--message-out", message_out, "write the embedded bits here");
  embed_cmd->add_option("--seed", seed, "secret key seed")->capture_default_str();
  embed_cmd->add_option("--output,-o", output, "stego signal file or PGM")->required();

  // extract
  SchemeOptions extract_opts;
  std::string extract_in, reference;
  auto* extract_cmd = app.add_subcommand("extract", "decode the message from a received signal");
  add_scheme_options(extract_cmd, extract_opts);
  extract_cmd->add_option("--input,-i", extract_in, "received signal file or PGM")->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("--reference", reference, "bit file to compare against; prints the BER")->check(CLI::ExistingFile);
  extract_cmd->add_option("--seed", seed, "secret key seed")->capture_default_str();
  extract_cmd->add_option("--output,-o", output, "decoded bit file");

  // attack
  std::string attack_in, attack_cover;
  double wnr_db = 0.0;
  std::optional<double> watermark_power;
  auto* attack_cmd = app.add_subcommand("attack", "active warden: add white Gaussian noise");
  attack_cmd->add_option("--input,-i", attack_in, "stego signal file or PGM")->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--wnr", wnr_db, "watermark-to-noise ratio, dB")->required();
  auto* power_opt = attack_cmd->add_option("--watermark-power", watermark_power, "watermark power to calibrate on");
  attack_cmd->add_option("--cover", attack_cover, "cover file; the watermark power is measured against it")
      ->check(CLI::ExistingFile)
      ->excludes(power_opt);
  attack_cmd->add_option("--seed", seed, "noise key seed")->capture_default_str();
  attack_cmd->add_option("--output,-o", output, "attacked signal file or PGM")->required();

  // analyze
  std::string analyze_in, analyze_cover;
  std::optional<double> analyze_sigma;
  auto* analyze_cmd = app.add_subcommand("analyze", "KLD and power ratios of a stego signal against its cover");
  analyze_cmd->add_option("--input,-i", analyze_in, "stego signal file or PGM")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--cover", analyze_cover, "cover signal file or PGM")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--sigma", analyze_sigma, "histogram scale; default: measured cover deviation");
  analyze_cmd->add_option("--output,-o", output, "also write the report here");

  // experiment
  std::string which, image_dir;
  std::optional<std::uint64_t> exp_seed;
  std::optional<std::size_t> exp_samples, exp_trials;
  bool no_plot = false;
  auto* exp_cmd = app.add_subcommand("experiment", "run a figure preset or a spec file");
  exp_cmd->add_option("target", which, "preset (fig1a fig3a fig3b fig4 fig5a fig5b fig6a fig6b fig7) or spec file")
      ->required();
  exp_cmd->add_option("--seed", exp_seed, "root key seed (overrides the preset)");
  exp_cmd->add_option("--output,-o", output, "CSV path (side files and SVG go next to it)");
  exp_cmd->add_option("--jobs,-j", jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  exp_cmd->add_option("--samples,-G", exp_samples, "override G");
  exp_cmd->add_option("--trials", exp_trials, "override capacity trials");
  exp_cmd->add_option("--image-dir", image_dir, "PGM directory for image runs");
  exp_cmd->add_flag("--no-plot", no_plot, "skip the SVG");

  CLI11_PARSE(app, argc, argv);

  try {
    if (embed_cmd->parsed()) {
      const Key key{seed};
      Loaded in = embed_in.empty() ? Loaded{gen_gaussian_host(host_samples, embed_opts.sigma.value_or(1.0), key), {}, 0.0}
                                   : load_input(embed_in);
      const auto spec = make_spec(embed_opts, sigma_for(embed_opts, in));
      auto [host, tail] = split_blocks(in.signal, spec.samples_per_bit());
      const std::size_t bits = message_length(spec, host.size());
      BitMessage message = message_in.empty() ? BitMessage::random(bits, key) : cli::read_bits(message_in);
      if (message.size() != bits)
        throw Error(ErrorKind::LengthMismatch, "message has " + std::to_string(message.size()) + " bits, host carries " +
                                                   std::to_string(bits));
      const Signal stego = join(embed(spec, host, message, key), tail);
      save_output(output, stego, in);
      if (!message_out.empty()) cli::write_bits(message_out, message);
      const double wm = empirical_power(difference(stego.samples(), in.signal.samples()));
      std::cout << "bits=" << bits << " sigma=" << format_number(spec.sigma_s)
                << " measured_dwr_db=" << format_number(linear_to_db(empirical_power(in.signal.samples()) / wm).db)
                << " watermark_power=" << format_number(wm) << "\n";
    } else if (extract_cmd->parsed()) {
      const Key key{seed};
      const Loaded in = load_input(extract_in);
      const auto spec = make_spec(extract_opts, sigma_for(extract_opts, in));
      const auto [head, tail] = split_blocks(in.signal, spec.samples_per_bit());
      const BitMessage decoded = extract(spec, head, key);
      if (!output.empty()) cli::write_bits(output, decoded);
      std::cout << "bits=" << decoded.size();
      if (!reference.empty()) std::cout << " ber=" << format_number(bit_error_rate(cli::read_bits(reference), decoded));
      std::cout << "\n";
    } else if (attack_cmd->parsed()) {
      const Loaded in = load_input(attack_in);
      double power = 0.0;
      if (watermark_power) {
        power = *watermark_power;
      } else if (!attack_cover.empty()) {
        const Loaded cover = load_input(attack_cover);
        power = empirical_power(difference(in.signal.samples(), cover.signal.samples()));
      } else {
        throw Error(ErrorKind::InvalidParameter, "attack needs --watermark-power or --cover");
      }
      if (!(power > 0.0)) throw Error(ErrorKind::InvalidParameter, "watermark power must be positive");
      const Signal attacked = awgn_attack(in.signal, power, AttackParams{DbRatio{wnr_db}, Key{seed}});
      save_output(output, attacked, in);
      std::cout << "noise_power=" << format_number(noise_power_for(power, DbRatio{wnr_db})) << "\n";
    } else if (analyze_cmd->parsed()) {
      const Loaded stego = load_input(analyze_in);
      const Loaded cover = load_input(analyze_cover);
      if (stego.signal.size() != cover.signal.size())
        throw Error(ErrorKind::LengthMismatch, "stego and cover lengths differ");
      const double cover_power = empirical_power(cover.signal.samples());
      const double sigma = analyze_sigma.value_or(std::sqrt(cover_power));
      const auto report = kld_of_signals(stego.signal.samples(), cover.signal.samples(), sigma);
      const double wm = empirical_power(difference(stego.signal.samples(), cover.signal.samples()));
      std::string text = "samples=" + std::to_string(cover.signal.size()) + "\nkld_bits=" + format_number(report.kld_bits) +
                         "\nbins=" + std::to_string(report.bins) + "\nepsilon=" + format_number(report.epsilon) +
                         "\ncover_power=" + format_number(cover_power) + "\nwatermark_power=" + format_number(wm) +
                         "\nmeasured_dwr_db=" + (wm > 0.0 ? format_number(linear_to_db(cover_power / wm).db) : "inf") +
                         "\n";
      std::cout << text;
      if (!output.empty()) {
        std::ofstream f(output);
        if (!(f << text)) throw Error(ErrorKind::Io, "cannot write " + output);
      }
    } else if (exp_cmd->parsed()) {
      ExperimentSpec spec = is_preset(which) ? preset(which) : load_spec_file(which);
      if (exp_seed) spec.seed = *exp_seed;
      if (exp_samples) spec.samples = *exp_samples;
      if (exp_trials) spec.trials = *exp_trials;
      if (!image_dir.empty()) spec.image_dir = image_dir;
      const auto start = std::chrono::steady_clock::now();
      const auto result = run_experiment(spec, jobs);
      const auto files = write_outputs(spec, result, output, !no_plot);
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      std::cout << spec.name << ": " << result.records.size() << " records in " << format_number(std::round(took.count() * 10) / 10)
                << " s\n";
      for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "stegosim: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "stegosim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
