#include "anm/stimulus_optimizer.hpp"

#include "anm/error.hpp"
#include "anm/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace anm {

StimulusFitness stimulus_fitness(const StimulusProgram& stimulus, double sample_dt, double threshold,
                                 EvaluationCounter* counter) {
  if (stimulus.alphabet.size() < 2) return {};
  const auto ideals = ideal_responses(stimulus);
  std::vector<SpikeTrain> trains;
  trains.reserve(ideals.size());
  for (const auto& [pattern, train] : ideals) trains.push_back(train);
  const auto m = distance_matrix(trains, sample_dt, {}, counter);
  StimulusFitness f;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = i + 1; j < m.n; ++j) {
      sum += m(i, j);
      ++pairs;
      if (m(i, j) >= threshold) ++f.over_threshold;
    }
  }
  f.fitness = sum / static_cast<double>(pairs);
  return f;
}

void validate(const StimulusOptSettings& s) {
  if (s.population_size < 2) throw ValidationError("population_size must be at least 2");
  if (s.generations < 1) throw ValidationError("generations must be at least 1");
  if (s.min_length < 1 || s.min_length > s.max_length) throw ValidationError("length bounds must satisfy 1 <= min_length <= max_length");
  if (!(s.elite_fraction > 0.0 && s.elite_fraction < 1.0)) throw ValidationError("elite_fraction must lie in (0, 1)");
  if (!(s.mutation_rate >= 0.0 && s.mutation_rate <= 1.0)) throw ValidationError("mutation_rate must lie in [0, 1]");
  validate(s.encoding);
  if (!(s.sample_dt > 0.0)) throw ValidationError("sample_dt must be positive");
}

std::vector<std::uint8_t> symmetric_crossover(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                                              std::size_t length) {
  if (a.empty() || b.empty()) throw ValidationError("crossover parents must be non-empty");
  std::vector<std::uint8_t> child(length);
  const std::size_t half = length / 2;
  for (std::size_t i = 0; i < length; ++i) {
    const auto& parent = i < half ? a : b;
    child[i] = parent[static_cast<std::size_t>(static_cast<unsigned long long>(i) * parent.size() / length)];
  }
  return child;
}

namespace {

enum Stream : std::uint64_t { kInitial = 21, kBreed = 22 };

std::uint8_t random_pattern(Rng& rng) { return static_cast<std::uint8_t>(rng.between(1, 255)); }

struct Individual {
  std::vector<std::uint8_t> patterns;
  StimulusFitness fitness;
  bool evaluated = false;
};

}  // namespace

StimulusOptResult optimize_stimulus(const StimulusOptSettings& s) {
  validate(s);
  const auto pop = static_cast<std::size_t>(s.population_size);
  const auto elites = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::floor(s.elite_fraction * static_cast<double>(pop) + 0.5)), 1, pop - 1);

  std::vector<Individual> population(pop);
  for (std::size_t slot = 0; slot < pop; ++slot) {
    Rng rng = Rng::stream(s.seed, {kInitial, slot});
    const auto length = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(s.min_length), static_cast<std::int64_t>(s.max_length)));
    auto& p = population[slot].patterns;
    p.resize(length);
    for (auto& x : p) x = random_pattern(rng);
  }

  StimulusOptResult result;
  for (int gen = 0; gen < s.generations; ++gen) {
    for (auto& ind : population) {
      if (ind.evaluated) continue;
      ind.fitness = stimulus_fitness(encode_patterns(ind.patterns, s.encoding), s.sample_dt, s.threshold);
      ind.evaluated = true;
      ++result.fitness_evaluations;
    }
    std::vector<std::size_t> order(pop);
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
      return population[a].fitness.fitness > population[b].fitness.fitness;
    });

    const auto& best = population[order.front()];
    if (gen == 0 || best.fitness.fitness > result.best_fitness.fitness) {
      result.best = best.patterns;
      result.best_fitness = best.fitness;
    }
    result.best_so_far.push_back(result.best_fitness);
    auto [shortest, longest] = std::ranges::minmax(population, {}, [](const Individual& i) { return i.patterns.size(); });
    result.lengths_seen_min.push_back(shortest.patterns.size());
    result.lengths_seen_max.push_back(longest.patterns.size());
    if (gen + 1 == s.generations) break;

    std::vector<Individual> next;
    next.reserve(pop);
    for (std::size_t e = 0; e < elites; ++e) next.push_back(population[order[e]]);
    for (std::size_t slot = elites; slot < pop; ++slot) {
      Rng rng = Rng::stream(s.seed, {kBreed, static_cast<std::uint64_t>(gen + 1), slot});
      std::size_t first = rng.below(elites), second = first;
      if (elites > 1) {
        second = rng.below(elites - 1);
        if (second >= first) ++second;
      }
      const auto length = static_cast<std::size_t>(
          rng.between(static_cast<std::int64_t>(s.min_length), static_cast<std::int64_t>(s.max_length)));
      Individual child;
      child.patterns = symmetric_crossover(population[order[first]].patterns, population[order[second]].patterns, length);
      for (auto& x : child.patterns) {
        if (!rng.chance(s.mutation_rate)) continue;
        auto replacement = static_cast<std::uint8_t>(rng.between(1, 254));
        if (replacement >= x) ++replacement;
        x = replacement;
      }
      next.push_back(std::move(child));
    }
    population = std::move(next);
  }
  return result;
}

}  // namespace anm
