#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stego/experiments.hpp"
#include "stego/image_io.hpp"

using namespace stego;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "stego_experiments_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

ExperimentSpec small_kld() {
  ExperimentSpec s;
  s.kind = ExperimentKind::Kld;
  s.schemes = {Scheme::Scs, Scheme::StScs};
  s.alpha = {0.3, 0.6};
  s.tau = {2, 4};
  s.dwr_db = {10, 20};
  s.samples = 20000;
  s.seed = 99;
  return s;
}

}  // namespace

TEST_CASE("every preset validates") {
  for (const auto& name : preset_names()) {
    const auto s = preset(name);
    CHECK_NOTHROW(s.validate());
    CHECK(s.name == name);
    CHECK(s.samples <= 1000000);
    CHECK(s.trials <= 1000000);
  }
  CHECK_THROWS_AS(preset("fig2"), Error);
}

TEST_CASE("presets carry the stated figure parameters") {
  const auto f1 = preset("fig1a");
  CHECK(f1.alpha == std::vector<double>{0.3});
  CHECK(f1.dwr_db == std::vector<double>{13});
  const auto f3b = preset("fig3b");
  CHECK(f3b.tau == std::vector<std::size_t>{2});
  const auto f5b = preset("fig5b");
  CHECK(f5b.wnr_db.front() == -20);
  CHECK(f5b.wnr_db.back() == 12);
  CHECK(f5b.dwr_db.front() == 0);
  CHECK(f5b.dwr_db.back() == 40);
  CHECK(preset("fig4").tau == std::vector<std::size_t>{2, 10});
}

TEST_CASE("empty grids fail validation before anything is written") {
  const auto out = scratch("empty.csv");
  std::filesystem::remove(out);
  auto s = small_kld();
  s.dwr_db.clear();
  s.output = out.string();
  CHECK_THROWS_AS(run_experiment(s), Error);
  CHECK_FALSE(std::filesystem::exists(out));
  for (auto clear : {+[](ExperimentSpec& x) { x.schemes.clear(); }, +[](ExperimentSpec& x) { x.alpha.clear(); },
                     +[](ExperimentSpec& x) { x.tau.clear(); }}) {
    auto t = small_kld();
    clear(t);
    try {
      t.validate();
      FAIL("expected validation error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Validation);
    }
  }
  auto c = preset("fig3a");
  c.wnr_db.clear();
  CHECK_THROWS_AS(c.validate(), Error);
  auto g = small_kld();
  g.samples = 100;
  CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("grid cardinality and order") {
  const auto r = run_experiment(small_kld());
  // SCS ignores tau: 2 alphas x 2 DWR; ST-SCS: 2 x 2 x 2.
  REQUIRE(r.records.size() == 4 + 8);
  CHECK(r.records.front().scheme == Scheme::Scs);
  CHECK(r.records.front().tau == 1);
  CHECK(r.records[4].scheme == Scheme::StScs);
  CHECK(r.records[4].alpha == 0.3);
  CHECK(r.records[4].tau == 2);
  CHECK(r.records[4].dwr_db == 10);
  CHECK(r.records[5].dwr_db == 20);
  for (const auto& rec : r.records) {
    CHECK(rec.capacity_method == "none");
    CHECK(rec.seed == 99);
    CHECK(rec.kld_bits >= 0);
  }
}

TEST_CASE("fig5a preset has one row per scheme and DWR") {
  auto s = preset("fig5a");
  s.samples = 10000;
  const auto r = run_experiment(s);
  CHECK(r.records.size() == s.schemes.size() * s.dwr_db.size());
}

TEST_CASE("same seed gives byte-identical CSV, independent of worker count") {
  auto s = small_kld();
  const auto a = format_csv(run_experiment(s, 1).records);
  const auto b = format_csv(run_experiment(s, 3).records);
  CHECK(a == b);
  s.seed = 100;
  CHECK(format_csv(run_experiment(s, 1).records) != a);
}

TEST_CASE("CSV layout") {
  ExperimentRecord rec{Scheme::Tcq, 0.3, 1, 13, 0, 0.00125, 0, "none", 0.5, 1000000, 0, 7};
  const auto csv = format_csv({rec});
  CHECK(line_count(csv) == 2);
  CHECK(csv == std::string(kCsvHeader) + "\ntcq,0.3,1,13,0,0.00125,0,none,0.5,1000000,0,7\n");
  CHECK_THROWS_AS(format_csv({}), Error);
  rec.kld_bits = std::nan("");
  CHECK_THROWS_AS(format_csv({rec}), Error);
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-7) == "1e-07");
}

TEST_CASE("density runs emit per-bin triples") {
  ExperimentSpec s;
  s.kind = ExperimentKind::Density;
  s.schemes = {Scheme::Scs, Scheme::Tcq};
  s.alpha = {0.3};
  s.dwr_db = {13};
  s.samples = 100000;
  const auto r = run_experiment(s);
  CHECK(r.records.size() == 2);
  REQUIRE(r.density.size() == 2 * kKldBins);
  double host = 0, emp = 0, theo = 0;
  for (std::size_t i = 0; i < kKldBins; ++i) {
    host += r.density[i].host_pdf * 0.05;
    emp += r.density[i].empirical_pdf * 0.05;
    theo += r.density[i].theoretical_pdf * 0.05;
  }
  CHECK(host == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(emp == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(theo == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(line_count(format_density_csv(r.density)) == 2 * kKldBins + 1);
}

TEST_CASE("capacity runs label the alpha policy") {
  ExperimentSpec s;
  s.kind = ExperimentKind::Capacity;
  s.schemes = {Scheme::Scs, Scheme::Tcq};
  s.alpha = {0.7};
  s.alpha_search = {0.5, 1.0};
  s.dwr_db = {13};
  s.wnr_db = {0, 10};
  s.samples = 10000;
  s.trials = 100000;
  s.alpha_policy = AlphaPolicy::Both;
  const auto r = run_experiment(s);
  REQUIRE(r.records.size() == 2 * 2 * 2);
  CHECK(r.records[0].capacity_method == "mi/fixed-alpha");
  CHECK(r.records[2].capacity_method == "bsc/fixed-alpha");
  CHECK(r.records[4].capacity_method == "mi/optimized-alpha");
  CHECK(r.records[6].capacity_method == "bsc/optimized-alpha");
  for (const auto& rec : r.records) {
    CHECK(rec.capacity_bits >= 0);
    CHECK(rec.capacity_bits <= 1);
    CHECK(rec.trials == 100000);
  }
}

TEST_CASE("derivative runs report the noise floor") {
  ExperimentSpec s;
  s.kind = ExperimentKind::Derivative;
  s.schemes = {Scheme::StScs};
  s.alpha = {0.3, 0.5};
  s.tau = {2};
  s.dwr_db = {13};
  s.samples = 50000;
  const auto r = run_experiment(s);
  REQUIRE(r.derivative.size() == 2);
  CHECK(r.derivative[0].noise_floor > 0);
  CHECK(r.derivative[0].noise_floor == r.derivative[1].noise_floor);
  s.alpha = {0.02};
  CHECK_THROWS_AS(run_experiment(s), Error);
}

TEST_CASE("image runs average over a PGM directory") {
  const auto dir = scratch("images");
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (int k = 0; k < 2; ++k) {
    std::vector<std::uint8_t> px(64 * 64);
    const KeyedStream rng(Key{std::uint64_t(k)}, Stream::Host);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint8_t>(std::clamp(128 + 30 * rng.gaussian(i), 0.0, 255.0));
    save_pgm(dir / ("img" + std::to_string(k) + ".pgm"), GrayImage(64, 64, px));
  }
  auto s = preset("fig7");
  s.image_dir = dir.string();
  s.dwr_db = {20, 30};
  const auto r = run_experiment(s);
  REQUIRE(r.records.size() == 3 * 2);
  CHECK(r.records[0].trials == 2);
  CHECK(r.records[0].samples == 2 * 64 * 64);
  s.image_dir = (dir / "missing").string();
  CHECK_THROWS_AS(run_experiment(s), Error);
}

TEST_CASE("spec files") {
  const auto s = parse_spec_text(R"(# custom sweep
kind = kld
schemes = scs, stscs
alpha = 0.1:0.1:0.3
tau = 2, 4
dwr_db = 13
G = 1e5
seed = 12
output = out/run.csv  # trailing comment
)");
  CHECK(s.kind == ExperimentKind::Kld);
  CHECK(s.schemes == std::vector<Scheme>{Scheme::Scs, Scheme::StScs});
  REQUIRE(s.alpha.size() == 3);
  CHECK(s.alpha[2] == doctest::Approx(0.3));
  CHECK(s.tau == std::vector<std::size_t>{2, 4});
  CHECK(s.samples == 100000);
  CHECK(s.seed == 12);
  CHECK(s.output == "out/run.csv");

  const auto p = parse_spec_text("preset = fig6a\nseed = 5\n");
  CHECK(p.tau == preset("fig6a").tau);
  CHECK(p.seed == 5);

  CHECK_THROWS_AS(parse_spec_text("bogus = 1\n"), Error);
  CHECK_THROWS_AS(parse_spec_text("alpha 0.3\n"), Error);
  CHECK_THROWS_AS(parse_spec_text("alpha = 0.3\nalpha = 0.4\n"), Error);
  CHECK_THROWS_AS(parse_spec_text("G = 1.5\n"), Error);
  CHECK_THROWS_AS(parse_spec_text("kind = movie\n"), Error);
  CHECK_THROWS_AS(parse_spec_text("schemes = qim\n"), Error);
  CHECK_THROWS_AS(load_spec_file("/nonexistent.spec"), Error);
}

TEST_CASE("outputs and plot") {
  auto s = small_kld();
  s.output = scratch("run/out.csv").string();
  const auto r = run_experiment(s);
  const auto files = write_outputs(s, r, {}, true);
  REQUIRE(files.size() == 2);
  CHECK(slurp(files[0]) == format_csv(r.records));
  const auto svg = slurp(files[1]);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("stscs") != std::string::npos);
  CHECK_THROWS_AS(render_plot(r.records, "nope", "kld_bits"), Error);
  CHECK_THROWS_AS(emit_csv(r.records, "/proc/forbidden/x.csv"), Error);
}
