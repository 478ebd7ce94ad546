#include "anm/targeted_evolution.hpp"

#include "anm/error.hpp"
#include "anm/parallel.hpp"

#include <algorithm>

namespace anm {

void validate(const TargetedSettings& s) {
  if (s.population_size < 2) throw ValidationError("population_size must be at least 2");
  if (s.generations < 1) throw ValidationError("generations must be at least 1");
  if (s.tournament_size < 1) throw ValidationError("tournament_size must be at least 1");
  if (s.initial_motifs < 1) throw ValidationError("initial_motifs must be at least 1");
  if (!(s.pruning.end < s.pruning.start)) throw ValidationError("pruning_end must be below pruning_start");
  if (!(s.operators.ratio_low > 0.0 && s.operators.ratio_low <= 1.0))
    throw ValidationError("ratio_low must lie in (0, 1]");
  validate(s.neuron);
  if (!(s.sample_dt > 0.0)) throw ValidationError("sample_dt must be positive");
}

double targeted_fitness(const Genome& genome, const StimulusProgram& stimulus, const SpikeTrain& target,
                        const NeuronParams& params, double sample_dt) {
  if (target.duration != stimulus.duration())
    throw ValidationError("target duration does not match stimulus duration");
  const auto outputs = evaluate_behaviour(genome, stimulus, params);
  double sum = 0.0;
  for (const auto& out : outputs) sum += spike_distance(out, target, sample_dt);
  return sum / static_cast<double>(outputs.size());
}

namespace {

enum Stream : std::uint64_t { kInitial = 11, kBreed = 12 };

}  // namespace

TargetedResult evolve_targeted(const TargetedSettings& s, const StimulusProgram& stimulus, const SpikeTrain& target,
                               const MotifSet& motif_set) {
  validate(s);
  if (target.duration != stimulus.duration())
    throw ValidationError("target duration does not match stimulus duration");

  const auto pop = static_cast<std::size_t>(s.population_size);
  auto id_for = [&](int gen, std::size_t slot) {
    return static_cast<GenomeId>(gen) * pop + slot + 1;
  };

  std::vector<Genome> population(pop);
  std::vector<double> fitness(pop, 0.0);
  std::vector<bool> known(pop, false);
  parallel_for(pop, [&](std::size_t slot) {
    Rng rng = Rng::stream(s.seed, {kInitial, slot});
    population[slot] = random_genome(rng, s.initial_motifs, motif_set, s.operators.p_conn, Birth{id_for(0, slot), 0},
                                     s.operators.output_count);
  });

  TargetedResult result;
  MutationMode mode = MutationMode::normal;
  for (int gen = 0; gen < s.generations; ++gen) {
    parallel_for(pop, [&](std::size_t i) {
      if (!known[i]) fitness[i] = targeted_fitness(population[i], stimulus, target, s.neuron, s.sample_dt);
    });
    std::fill(known.begin(), known.end(), true);

    const auto best_it = std::ranges::min_element(fitness);
    const auto best = static_cast<std::size_t>(best_it - fitness.begin());
    if (gen == 0 || fitness[best] < result.best_distance) {
      result.best_distance = fitness[best];
      result.best = population[best];
    }
    result.best_so_far.push_back(result.best_distance);
    result.generation_best.push_back(fitness[best]);
    const double complexity = mean_complexity(population);
    result.mean_complexity.push_back(complexity);

    if (result.best_distance <= s.goal || gen + 1 == s.generations) break;

    mode = pruning_controller(complexity, mode, s.pruning);
    std::vector<Genome> next(pop);
    std::vector<bool> next_known(pop, false);
    std::vector<double> next_fitness(pop, 0.0);
    next[0] = result.best;
    next_known[0] = true;
    next_fitness[0] = result.best_distance;
    const int child_gen = gen + 1;
    parallel_for(pop - 1, [&](std::size_t k) {
      const std::size_t slot = k + 1;
      Rng rng = Rng::stream(s.seed, {kBreed, static_cast<std::uint64_t>(child_gen), slot});
      auto tournament = [&] {
        std::size_t winner = rng.below(pop);
        for (int t = 1; t < s.tournament_size; ++t) {
          const std::size_t c = rng.below(pop);
          if (fitness[c] < fitness[winner]) winner = c;
        }
        return winner;
      };
      std::size_t a = tournament(), b = tournament();
      if (fitness[b] < fitness[a]) std::swap(a, b);
      Genome child = crossover(population[a], population[b], s.operators.ratio_low, s.operators.p_conn, rng,
                               Birth{id_for(child_gen, slot), child_gen});
      next[slot] = mutate(child, mode, s.operators.rates, motif_set, s.operators.p_conn, rng);
    });
    population = std::move(next);
    known = std::move(next_known);
    fitness = std::move(next_fitness);
  }
  return result;
}

}  // namespace anm
