#include <benchmark/benchmark.h>

#include "stego/analysis.hpp"
#include "stego/density.hpp"
#include "stego/scheme.hpp"
#include "stego/spread.hpp"
#include "stego/tcq.hpp"

using namespace stego;

namespace {

SchemeSpec spec_for(Scheme scheme) {
  SchemeSpec s;
  s.scheme = scheme;
  s.alpha = 0.3;
  s.dwr = DbRatio{13.0};
  s.tau = 2;
  return s;
}

void embed_bench(benchmark::State& state, Scheme scheme) {
  const auto spec = spec_for(scheme);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto host = gen_gaussian_host(n, 1.0, Key{1});
  const auto msg = BitMessage::random(n / spec.samples_per_bit(), Key{1});
  for (auto _ : state) benchmark::DoNotOptimize(embed(spec, host, msg, Key{1}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_ScsEmbed(benchmark::State& state) { embed_bench(state, Scheme::Scs); }
void BM_TcqEmbed(benchmark::State& state) { embed_bench(state, Scheme::Tcq); }
void BM_StScsEmbed(benchmark::State& state) { embed_bench(state, Scheme::StScs); }

void BM_ViterbiFree(benchmark::State& state) {
  const auto t = build_trellis(static_cast<int>(state.range(0)));
  const auto obs = gen_gaussian_host(100000, 1.0, Key{2});
  for (auto _ : state) benchmark::DoNotOptimize(viterbi_free(obs.samples(), t, LatticeStep(0.5)));
  state.SetItemsProcessed(state.iterations() * 100000);
}

void BM_StScsOracle(benchmark::State& state) {
  const auto p = stscs_params(spec_for(Scheme::StScs), Key{3});
  const auto host = HostDensity::gaussian(1.0);
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stscs_theoretical_pdf(x, p, host));
    x = x > 3.0 ? -3.0 : x + 0.01;
  }
}

void BM_StegoKld(benchmark::State& state) {
  const auto spec = spec_for(Scheme::Scs);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stego_kld(spec, n, Key{4}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_ScsEmbed)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_TcqEmbed)->Arg(1 << 16);
BENCHMARK(BM_StScsEmbed)->Arg(1 << 16);
BENCHMARK(BM_ViterbiFree)->Arg(2)->Arg(6);
BENCHMARK(BM_StScsOracle);
BENCHMARK(BM_StegoKld)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK_MAIN();
