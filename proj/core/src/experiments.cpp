#include "stego/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "stego/image_io.hpp"

namespace stego {

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::Density: return "density";
    case ExperimentKind::Kld: return "kld";
    case ExperimentKind::Capacity: return "capacity";
    case ExperimentKind::Derivative: return "derivative";
    case ExperimentKind::Images: return "images";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::Density, ExperimentKind::Kld, ExperimentKind::Capacity, ExperimentKind::Derivative,
                 ExperimentKind::Images})
    if (name == to_string(k)) return k;
  throw Error(ErrorKind::Validation, "unknown experiment kind '" + std::string(name) + "'");
}

std::string_view to_string(AlphaPolicy policy) noexcept {
  switch (policy) {
    case AlphaPolicy::Fixed: return "fixed";
    case AlphaPolicy::Optimized: return "optimized";
    case AlphaPolicy::Both: return "both";
  }
  return "?";
}

AlphaPolicy parse_alpha_policy(std::string_view name) {
  for (auto p : {AlphaPolicy::Fixed, AlphaPolicy::Optimized, AlphaPolicy::Both})
    if (name == to_string(p)) return p;
  throw Error(ErrorKind::Validation, "unknown alpha policy '" + std::string(name) + "'");
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::Validation, message);
}

bool has_scheme(const ExperimentSpec& s, Scheme scheme) {
  return std::find(s.schemes.begin(), s.schemes.end(), scheme) != s.schemes.end();
}

bool uses_fixed_alpha(const ExperimentSpec& s) {
  return s.kind != ExperimentKind::Capacity || s.alpha_policy != AlphaPolicy::Optimized;
}

bool uses_optimized_alpha(const ExperimentSpec& s) {
  return s.kind == ExperimentKind::Capacity && s.alpha_policy != AlphaPolicy::Fixed;
}

}  // namespace

void ExperimentSpec::validate() const {
  require(!schemes.empty(), "scheme list is empty");
  require(!dwr_db.empty(), "dwr_db grid is empty");
  for (double d : dwr_db) require(std::isfinite(d), "dwr_db values must be finite");
  if (uses_fixed_alpha(*this)) {
    require(!alpha.empty(), "alpha grid is empty");
    const bool open = kind == ExperimentKind::Density || kind == ExperimentKind::Derivative;
    for (double a : alpha) {
      require(a > 0.0 && a <= 1.0, "alpha values must lie in (0, 1]");
      if (open) require(a < 1.0, "density and derivative runs need alpha < 1");
      if (kind == ExperimentKind::Derivative)
        require(a - derivative_step > 0.0 && a + derivative_step < 1.0, "alpha +- derivative_step leaves (0, 1)");
    }
  }
  if (uses_optimized_alpha(*this)) {
    require(!alpha_search.empty(), "alpha_search grid is empty");
    for (double a : alpha_search) require(a > 0.0 && a <= 1.0, "alpha_search values must lie in (0, 1]");
  }
  if (kind == ExperimentKind::Derivative) require(derivative_step > 0.0, "derivative_step must be positive");
  if (has_scheme(*this, Scheme::StScs)) {
    require(!tau.empty(), "tau grid is empty");
    for (auto t : tau) {
      require(t >= 1, "tau must be >= 1");
      if (kind == ExperimentKind::Density) require(t >= 2, "density runs need tau >= 2");
    }
  }
  if (has_scheme(*this, Scheme::Tcq)) require(trellis_bits >= 2 && trellis_bits <= 20, "trellis_bits must be in [2, 20]");
  switch (kind) {
    case ExperimentKind::Density:
    case ExperimentKind::Kld:
    case ExperimentKind::Derivative:
      require(samples >= 10000, "G must be >= 10000");
      break;
    case ExperimentKind::Capacity:
      require(!wnr_db.empty(), "wnr_db grid is empty");
      require(samples >= 10000, "G must be >= 10000");
      if (has_scheme(*this, Scheme::Scs) || has_scheme(*this, Scheme::StScs))
        require(trials >= kMinMiTrials, "trials must be >= " + std::to_string(kMinMiTrials) + " for MI capacity");
      require(trials >= kMinBerTrials, "trials must be >= " + std::to_string(kMinBerTrials));
      break;
    case ExperimentKind::Images:
      require(!image_dir.empty(), "image_dir is required for image runs");
      break;
  }
}

// Presets. Values the figures leave open are marked "default".
std::vector<std::string> preset_names() {
  return {"fig1a", "fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig6a", "fig6b", "fig7"};
}

bool is_preset(std::string_view name) {
  const auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ExperimentSpec preset(std::string_view name) {
  ExperimentSpec s;
  s.name = std::string(name);
  s.output = s.name + ".csv";
  s.alpha_search = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};  // default
  if (name == "fig1a") {
    // SCS host and stego densities; about 5 s.
    s.kind = ExperimentKind::Density;
    s.schemes = {Scheme::Scs};
    s.alpha = {0.3};
    s.dwr_db = {13.0};
    s.samples = 1000000;  // default
  } else if (name == "fig3a") {
    // Capacity against WNR under both alpha policies; about 2 min.
    s.kind = ExperimentKind::Capacity;
    s.schemes = {Scheme::Scs, Scheme::Tcq, Scheme::StScs};
    s.alpha = {0.7};                                          // default, fixed policy
    s.tau = {2};                                              // default
    s.dwr_db = {13.0};                                        // default
    s.wnr_db = {-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 12.0};
    s.alpha_policy = AlphaPolicy::Both;
    s.samples = 100000;  // default, G for the KLD column
    s.trials = 100000;   // default
  } else if (name == "fig3b") {
    // ST-SCS tau = 2 KLD slope in alpha; about 1 min.
    s.kind = ExperimentKind::Derivative;
    s.schemes = {Scheme::StScs};
    s.alpha = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    s.tau = {2};
    s.dwr_db = {13.0};  // default
    s.samples = 1000000;
    s.derivative_step = 0.05;  // default
  } else if (name == "fig4") {
    // ST-SCS densities for tau 2 and 10; about 1 min.
    s.kind = ExperimentKind::Density;
    s.schemes = {Scheme::StScs};
    s.alpha = {0.3, 0.7};  // default
    s.tau = {2, 10};
    s.dwr_db = {13.0};
    s.samples = 1000000;
  } else if (name == "fig5a") {
    // KLD against DWR for the three schemes; about 1 min.
    s.kind = ExperimentKind::Kld;
    s.schemes = {Scheme::Scs, Scheme::Tcq, Scheme::StScs};
    s.alpha = {0.3};  // default
    s.tau = {2};      // default
    s.dwr_db = {0.0, 5.0, 10.0, 13.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
    s.samples = 1000000;
  } else if (name == "fig5b") {
    // Capacity against KLD over the full (DWR, WNR) grid; about 3 min.
    s.kind = ExperimentKind::Capacity;
    s.schemes = {Scheme::Scs, Scheme::Tcq, Scheme::StScs};
    s.tau = {2};  // default
    s.dwr_db = {0.0, 10.0, 20.0, 30.0, 40.0};
    s.wnr_db = {-20.0, -10.0, 0.0, 10.0, 12.0};
    s.alpha_policy = AlphaPolicy::Optimized;  // default
    s.samples = 100000;                       // default
    s.trials = 100000;                        // default
  } else if (name == "fig6a") {
    // ST-SCS KLD against tau for several alpha; about 1 min.
    s.kind = ExperimentKind::Kld;
    s.schemes = {Scheme::StScs};
    s.alpha = {0.3, 0.5, 0.7};  // default
    s.tau = {2, 4, 6, 8, 10};
    s.dwr_db = {13.0};  // default
    s.samples = 1000000;
  } else if (name == "fig6b") {
    // ST-SCS KLD against alpha for several tau; about 1 min.
    s.kind = ExperimentKind::Kld;
    s.schemes = {Scheme::StScs};
    s.alpha = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    s.tau = {2, 4, 10};
    s.dwr_db = {13.0};  // default
    s.samples = 1000000;
  } else if (name == "fig7") {
    // KLD against DWR on the PGM files of image_dir, averaged over images.
    // Curves are comparable in shape only: the original image set is not
    // available. Runtime scales with the image count (about 2 s per image).
    s.kind = ExperimentKind::Images;
    s.schemes = {Scheme::Scs, Scheme::Tcq, Scheme::StScs};
    s.alpha = {0.3};  // default
    s.tau = {2};      // default
    s.dwr_db = {5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
    s.image_dir = "images";  // default
  } else {
    throw Error(ErrorKind::Validation, "unknown preset '" + std::string(name) + "'");
  }
  return s;
}

namespace {

// Runs fn(i) for i in [0, n) on `jobs` threads. The first failure (lowest
// index) is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct GridPoint {
  Scheme scheme;
  double alpha;  // NaN when the alpha is searched
  std::size_t tau;
  double dwr_db;
};

std::string describe(const GridPoint& p) {
  std::ostringstream o;
  o << "grid point scheme=" << to_string(p.scheme);
  if (!std::isnan(p.alpha)) o << " alpha=" << format_number(p.alpha);
  if (p.scheme == Scheme::StScs) o << " tau=" << p.tau;
  o << " dwr_db=" << format_number(p.dwr_db);
  return o.str();
}

SchemeSpec scheme_spec(const ExperimentSpec& s, const GridPoint& p, double sigma_s = 1.0) {
  SchemeSpec out;
  out.scheme = p.scheme;
  out.alpha = std::isnan(p.alpha) ? 1.0 : p.alpha;
  out.dwr = DbRatio{p.dwr_db};
  out.tau = p.scheme == Scheme::StScs ? p.tau : 1;
  out.trellis_bits = s.trellis_bits;
  out.sigma_s = sigma_s;
  out.dwr_reference = s.dwr_reference;
  return out;
}

// Scheme-major, then alpha, tau, DWR.
std::vector<GridPoint> build_grid(const ExperimentSpec& s, bool searched_alpha) {
  std::vector<GridPoint> grid;
  const std::vector<double> alphas = searched_alpha ? std::vector<double>{std::nan("")} : s.alpha;
  for (auto scheme : s.schemes) {
    const std::vector<std::size_t> taus = scheme == Scheme::StScs ? s.tau : std::vector<std::size_t>{1};
    for (double a : alphas)
      for (auto t : taus)
        for (double d : s.dwr_db) grid.push_back(GridPoint{scheme, a, t, d});
  }
  return grid;
}

ExperimentRecord base_record(const ExperimentSpec& s, const GridPoint& p) {
  return ExperimentRecord{p.scheme, p.alpha, p.scheme == Scheme::StScs ? p.tau : 1, p.dwr_db, 0.0, 0.0, 0.0,
                          "none", 0.0, s.samples, 0, s.seed};
}

struct EmbedOutcome {
  Signal host;
  Signal stego;
  double kld_bits;
  double ber;
};

// Same keys as stego_kld, so the KLD here equals stego_kld(spec, G, key).
EmbedOutcome embed_and_measure(const SchemeSpec& spec, std::size_t samples, Key key) {
  const std::size_t per = spec.samples_per_bit();
  const std::size_t length = samples - samples % per;
  Signal host = gen_gaussian_host(length, spec.sigma_s, key);
  const BitMessage message = BitMessage::random(length / per, key);
  Signal stego = embed(spec, host, message, key);
  const double kld_bits = kld_of_signals(stego.samples(), host.samples(), spec.sigma_s).kld_bits;
  const double ber = bit_error_rate(message, extract(spec, stego, key));
  return EmbedOutcome{std::move(host), std::move(stego), kld_bits, ber};
}

std::vector<DensityRow> density_rows(const SchemeSpec& spec, const GridPoint& p, const EmbedOutcome& run) {
  const double lo = -kKldSupportSigmas * spec.sigma_s;
  const double hi = kKldSupportSigmas * spec.sigma_s;
  const auto empirical = build_histogram(run.stego.samples(), lo, hi, kKldBins);
  const auto model = stego_density_model(spec, lo, hi);
  const auto oracle = oracle_histogram(model.pdf, lo, hi, kKldBins, model.breakpoints);
  std::vector<DensityRow> rows;
  rows.reserve(kKldBins);
  for (std::size_t b = 0; b < kKldBins; ++b) {
    const double x = empirical.center(b);
    rows.push_back(DensityRow{p.scheme, p.alpha, spec.tau, p.dwr_db, x, gaussian_pdf(x, spec.sigma_s),
                              empirical.density(b), oracle.density(b)});
  }
  return rows;
}

ExperimentResult run_embedding_sweep(const ExperimentSpec& s, unsigned jobs) {
  const auto grid = build_grid(s, false);
  const Key key{s.seed};
  std::vector<ExperimentRecord> records(grid.size(), base_record(s, grid.front()));
  std::vector<std::vector<DensityRow>> density(grid.size());
  std::vector<std::optional<DerivativeRow>> slope(grid.size());

  double noise_floor = 0.0;
  if (s.kind == ExperimentKind::Derivative)
    noise_floor = kld_noise_floor(s.samples, 1.0, key).kld_bits / (2.0 * s.derivative_step);

  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    const auto& p = grid[i];
    try {
      const auto spec = scheme_spec(s, p);
      const auto run = embed_and_measure(spec, s.samples, key);
      auto rec = base_record(s, p);
      rec.kld_bits = run.kld_bits;
      rec.ber = run.ber;
      records[i] = rec;
      if (s.kind == ExperimentKind::Density) density[i] = density_rows(spec, p, run);
      if (s.kind == ExperimentKind::Derivative) {
        const auto d = kld_derivative_alpha(spec, p.alpha, s.derivative_step, s.samples, key);
        slope[i] = DerivativeRow{p.scheme, p.alpha, rec.tau, p.dwr_db, d.kld_minus, d.kld_plus, d.derivative,
                                 noise_floor};
      }
    } catch (const Error& e) {
      throw Error(e.kind(), describe(p) + ": " + e.message());
    }
  });

  ExperimentResult out;
  out.records = std::move(records);
  for (auto& rows : density) out.density.insert(out.density.end(), rows.begin(), rows.end());
  for (auto& d : slope)
    if (d) out.derivative.push_back(*d);
  return out;
}

ExperimentResult run_capacity_sweep(const ExperimentSpec& s, unsigned jobs) {
  struct Task {
    GridPoint point;
    bool optimized;
  };
  std::vector<Task> tasks;
  if (s.alpha_policy != AlphaPolicy::Optimized)
    for (const auto& p : build_grid(s, false)) tasks.push_back(Task{p, false});
  if (s.alpha_policy != AlphaPolicy::Fixed)
    for (const auto& p : build_grid(s, true)) tasks.push_back(Task{p, true});

  const Key key{s.seed};
  std::vector<std::vector<ExperimentRecord>> rows(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    const auto& task = tasks[i];
    try {
      auto spec = scheme_spec(s, task.point);
      const auto method = default_capacity_method(spec.scheme);
      const std::string label =
          std::string(to_string(method)) + (task.optimized ? "/optimized-alpha" : "/fixed-alpha");
      std::map<double, double> kld_at;
      for (double wnr : s.wnr_db) {
        CapacityEstimate cap{};
        if (task.optimized) {
          const auto choice = optimize_alpha(spec, DbRatio{wnr}, s.alpha_search, s.trials, key, method);
          spec.alpha = choice.alpha;
          cap = choice.capacity;
        } else {
          cap = estimate_capacity(spec, DbRatio{wnr}, s.trials, key, method);
        }
        auto it = kld_at.find(spec.alpha);
        if (it == kld_at.end()) it = kld_at.emplace(spec.alpha, stego_kld(spec, s.samples, key).kld_bits).first;
        auto rec = base_record(s, task.point);
        rec.alpha = spec.alpha;
        rec.wnr_db = wnr;
        rec.kld_bits = it->second;
        rec.capacity_bits = cap.bits_per_sample;
        rec.capacity_method = label;
        rec.ber = cap.ber;
        rec.trials = cap.trials;
        rows[i].push_back(rec);
      }
    } catch (const Error& e) {
      throw Error(e.kind(), describe(task.point) + ": " + e.message());
    }
  });

  ExperimentResult out;
  for (auto& r : rows) out.records.insert(out.records.end(), r.begin(), r.end());
  return out;
}

std::vector<std::filesystem::path> list_images(const std::string& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorKind::Io, "image_dir '" + dir + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (entry.is_regular_file() && ext == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorKind::Validation, "no .pgm files in '" + dir + "'");
  return files;
}

// Each image is a cover: embed in centred pixels, round back to 8 bits, and
// compare the pixel histograms on the image's own 5-sigma support.
ExperimentResult run_image_sweep(const ExperimentSpec& s, unsigned jobs) {
  const auto files = list_images(s.image_dir);
  std::vector<GrayImage> images(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) { images[i] = load_pgm(files[i]); });

  const auto grid = build_grid(s, false);
  const Key key{s.seed};
  std::size_t total_pixels = 0;
  for (const auto& img : images) total_pixels += img.pixels.size();

  std::vector<ExperimentRecord> records(grid.size(), base_record(s, grid.front()));
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    const auto& p = grid[i];
    double kld_sum = 0.0;
    double ber_sum = 0.0;
    for (std::size_t k = 0; k < images.size(); ++k) {
      try {
        const auto cover = image_to_signal(images[k]);
        const double sigma = std::sqrt(empirical_power(cover.signal.samples()));
        if (!(sigma > 0.0)) throw Error(ErrorKind::Validation, "constant image");
        const auto spec = scheme_spec(s, p, sigma);
        const std::size_t per = spec.samples_per_bit();
        const std::size_t usable = cover.signal.size() - cover.signal.size() % per;
        const Signal host(std::vector<double>(cover.signal.begin(), cover.signal.begin() + static_cast<std::ptrdiff_t>(usable)));
        const Key image_key = key.derive(k);
        const BitMessage message = BitMessage::random(usable / per, image_key);
        auto stego = embed(spec, host, message, image_key).samples();
        std::vector<double> marked(cover.signal.begin(), cover.signal.end());
        std::copy(stego.begin(), stego.end(), marked.begin());
        const auto pixels = signal_to_image(Signal(std::move(marked)), images[k].width, images[k].height, cover.mean);
        const auto back = image_to_signal(pixels);
        std::vector<double> received(back.signal.begin(), back.signal.begin() + static_cast<std::ptrdiff_t>(usable));
        for (auto& v : received) v += back.mean - cover.mean;
        kld_sum += kld_of_signals(received, host.samples(), sigma).kld_bits;
        ber_sum += bit_error_rate(message, extract(spec, Signal(std::move(received)), image_key));
      } catch (const Error& e) {
        throw Error(e.kind(), describe(p) + " image=" + files[k].string() + ": " + e.message());
      }
    }
    auto rec = base_record(s, p);
    const double n = static_cast<double>(images.size());
    rec.kld_bits = kld_sum / n;
    rec.ber = ber_sum / n;
    rec.samples = total_pixels;
    rec.trials = images.size();
    records[i] = rec;
  });
  return ExperimentResult{std::move(records), {}, {}};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned jobs) {
  spec.validate();
  switch (spec.kind) {
    case ExperimentKind::Density:
    case ExperimentKind::Kld:
    case ExperimentKind::Derivative: return run_embedding_sweep(spec, jobs);
    case ExperimentKind::Capacity: return run_capacity_sweep(spec, jobs);
    case ExperimentKind::Images: return run_image_sweep(spec, jobs);
  }
  throw Error(ErrorKind::Validation, "unknown experiment kind");
}

}  // namespace stego
