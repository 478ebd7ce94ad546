#include "anm/genome.hpp"
#include "anm/lif_sim.hpp"
#include "anm/novelty_search.hpp"
#include "anm/random.hpp"
#include "anm/spike_metrics.hpp"
#include "anm/stimulus_lab.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace anm;

namespace {

SpikeTrain poisson_like(Rng& rng, double duration, double rate) {
  SpikeTrain t(duration, {});
  for (double x = 0.0; x < duration; x += 1.0)
    if (rng.chance(rate)) t.times.push_back(x);
  return t;
}

std::string text_of(std::size_t n) {
  static const std::string base = "THE QUICK BROWN FOX JUMPS OVER THE LAZY DOG, AGAIN AND AGAIN. ";
  std::string s;
  while (s.size() < n) s += base;
  s.resize(n);
  return s;
}

void BM_spike_distance(benchmark::State& state) {
  Rng rng(1);
  const double duration = static_cast<double>(state.range(0));
  const auto a = poisson_like(rng, duration, 0.1), b = poisson_like(rng, duration, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(spike_distance(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(a.size() + b.size()));
}
BENCHMARK(BM_spike_distance)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_simulate(benchmark::State& state) {
  Rng rng(2);
  const auto g = random_genome(rng, static_cast<int>(state.range(0)), MotifSet::from_profile(MotifProfile::expanded),
                               0.25, Birth{1, 0});
  const auto stim = encode_text(text_of(1000));
  const NeuronParams p;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_behaviour(g, stim, p));
  state.counters["neurons"] = g.neuron_count();
}
BENCHMARK(BM_simulate)->Arg(2)->Arg(6)->Arg(12);

void BM_distance_matrix(benchmark::State& state) {
  Rng rng(3);
  std::vector<SpikeTrain> trains;
  for (long i = 0; i < state.range(0); ++i) trains.push_back(poisson_like(rng, 5000.0, 0.05));
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix(trains));
  state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}
BENCHMARK(BM_distance_matrix)->Arg(16)->Arg(64);

void BM_separability(benchmark::State& state) {
  const auto stim = encode_text(text_of(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(separability(stim));
}
BENCHMARK(BM_separability)->Arg(500)->Arg(3000);

}  // namespace

BENCHMARK_MAIN();
