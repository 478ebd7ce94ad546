#include "anm/novelty_search.hpp"

#include "anm/error.hpp"
#include "anm/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace anm {

void validate(const NoveltySettings& s) {
  if (s.population_size < 1) throw ValidationError("population_size must be at least 1");
  if (s.generations < 1) throw ValidationError("generations must be at least 1");
  if (s.k_neighbours < 1) throw ValidationError("k_neighbours must be at least 1");
  if (!(s.p_threshold_initial > 0.0 && s.p_threshold_initial <= 1.0))
    throw ValidationError("p_threshold_initial must lie in (0, 1]");
  if (s.stagnation_generations < 1) throw ValidationError("stagnation_generations must be at least 1");
  if (s.burst_additions < 1) throw ValidationError("burst_additions must be at least 1");
  if (s.burst_window < 1) throw ValidationError("burst_window must be at least 1");
  if (!(s.lower_factor > 0.0 && s.lower_factor < 1.0)) throw ValidationError("lower_factor must lie in (0, 1)");
  if (!(s.raise_factor > 1.0)) throw ValidationError("raise_factor must exceed 1");
  if (!(s.pruning.end < s.pruning.start)) throw ValidationError("pruning_end must be below pruning_start");
  if (s.initial_motifs < 1) throw ValidationError("initial_motifs must be at least 1");
  if (!(s.operators.p_conn >= 0.0 && s.operators.p_conn <= 1.0)) throw ValidationError("p_conn must lie in [0, 1]");
  if (!(s.operators.ratio_low > 0.0 && s.operators.ratio_low <= 1.0))
    throw ValidationError("ratio_low must lie in (0, 1]");
  if (s.operators.output_count < 1) throw ValidationError("output_count must be at least 1");
  validate(s.neuron);
  if (!(s.sample_dt > 0.0)) throw ValidationError("sample_dt must be positive");
}

double sparseness(std::vector<double> distances, int k) {
  if (distances.empty()) return 0.0;
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 1)), distances.size());
  std::partial_sort(distances.begin(), distances.begin() + static_cast<long>(take), distances.end());
  // Summing the sorted prefix keeps the result independent of input order.
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += distances[i];
  return sum / static_cast<double>(take);
}

double sparseness(std::size_t index, const DistanceMatrix& matrix, int k) {
  if (index >= matrix.n) throw ValidationError("behaviour index out of range");
  std::vector<double> row;
  row.reserve(matrix.n);
  for (std::size_t j = 0; j < matrix.n; ++j)
    if (j != index) row.push_back(matrix(index, j));
  return sparseness(std::move(row), k);
}

ThresholdUpdate threshold_update(double threshold, int generations_without_addition, int additions_in_window,
                                 const NoveltySettings& s) {
  if (generations_without_addition >= s.stagnation_generations)
    return {threshold * s.lower_factor, ThresholdTrigger::lowered};
  if (additions_in_window >= s.burst_additions) return {threshold * s.raise_factor, ThresholdTrigger::raised};
  return {threshold, ThresholdTrigger::none};
}

ThresholdController::ThresholdController(const NoveltySettings& settings)
    : settings_(settings), threshold_(settings.p_threshold_initial) {}

int ThresholdController::additions_in_window() const { return std::accumulate(window_.begin(), window_.end(), 0); }

ThresholdTrigger ThresholdController::end_generation(int additions) {
  without_ = additions > 0 ? 0 : without_ + 1;
  window_.push_back(additions);
  if (window_.size() > static_cast<std::size_t>(settings_.burst_window)) window_.erase(window_.begin());

  const auto update = threshold_update(threshold_, without_, additions_in_window(), settings_);
  threshold_ = update.threshold;
  if (update.trigger == ThresholdTrigger::lowered) without_ = 0;
  if (update.trigger == ThresholdTrigger::raised) window_.clear();
  return update.trigger;
}

MutationMode pruning_controller(double mean_complexity, MutationMode current, const PruningThresholds& t) {
  if (current == MutationMode::normal) return mean_complexity >= t.start ? MutationMode::pruning : MutationMode::normal;
  return mean_complexity <= t.end ? MutationMode::normal : MutationMode::pruning;
}

std::vector<SpikeTrain> evaluate_behaviour(const Genome& genome, const StimulusProgram& stimulus,
                                           const NeuronParams& params) {
  return simulate_outputs(tile(genome), stimulus.trains, params);
}

namespace {

enum Stream : std::uint64_t { kInitial = 1, kBreed = 2 };

GenomeId genome_id(int generation, int slot, int population) {
  return static_cast<GenomeId>(generation) * static_cast<GenomeId>(population) + static_cast<GenomeId>(slot) + 1;
}

}  // namespace

NoveltyArchive run_novelty_search(const NoveltySettings& s, const StimulusProgram& stimulus, const MotifSet& motif_set,
                                  const NoveltyObserver& observer) {
  validate(s);
  if (stimulus.trains.size() != static_cast<std::size_t>(kInputChannels))
    throw ValidationError("stimulus must provide " + std::to_string(kInputChannels) + " channels");

  const auto pop = static_cast<std::size_t>(s.population_size);
  std::vector<Genome> population(pop);
  parallel_for(pop, [&](std::size_t slot) {
    Rng rng = Rng::stream(s.seed, {kInitial, slot});
    population[slot] = random_genome(rng, s.initial_motifs, motif_set, s.operators.p_conn,
                                     Birth{genome_id(0, static_cast<int>(slot), s.population_size), 0},
                                     s.operators.output_count);
  });

  NoveltyArchive archive;
  ThresholdController threshold(s);
  MutationMode mode = MutationMode::normal;

  for (int gen = 0; gen < s.generations; ++gen) {
    std::vector<std::vector<SpikeTrain>> behaviours(pop);
    parallel_for(pop, [&](std::size_t i) { behaviours[i] = evaluate_behaviour(population[i], stimulus, s.neuron); });

    // Distances from each individual to the rest of the population and to the archive.
    const std::size_t archived = archive.entries.size();
    std::vector<double> pop_dist(pop * pop, 0.0);
    std::vector<double> arc_dist(pop * archived, 0.0);
    const std::size_t pair_jobs = pop * (pop - 1) / 2;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(pair_jobs);
    for (std::size_t i = 0; i < pop; ++i)
      for (std::size_t j = i + 1; j < pop; ++j) pairs.emplace_back(i, j);
    parallel_for(pair_jobs + pop * archived, [&](std::size_t job) {
      if (job < pair_jobs) {
        const auto [i, j] = pairs[job];
        pop_dist[i * pop + j] = behaviour_distance(behaviours[i], behaviours[j], s.sample_dt);
      } else {
        const std::size_t k = job - pair_jobs;
        const std::size_t i = k / archived, a = k % archived;
        arc_dist[k] = behaviour_distance(behaviours[i], archive.entries[a].behaviour.outputs, s.sample_dt);
      }
    });

    std::vector<double> scores(pop);
    for (std::size_t i = 0; i < pop; ++i) {
      std::vector<double> d;
      d.reserve(pop - 1 + archived);
      for (std::size_t j = 0; j < pop; ++j)
        if (j != i) d.push_back(i < j ? pop_dist[i * pop + j] : pop_dist[j * pop + i]);
      d.insert(d.end(), arc_dist.begin() + static_cast<long>(i * archived),
               arc_dist.begin() + static_cast<long>((i + 1) * archived));
      scores[i] = sparseness(std::move(d), s.k_neighbours);
    }

    GenerationRecord record;
    record.generation = gen;
    record.threshold = threshold.threshold();
    for (std::size_t i = 0; i < pop; ++i) {
      if (scores[i] >= record.threshold) {
        archive.entries.push_back(
            {population[i], BehaviourRecord{population[i].id, behaviours[i], scores[i], gen}, record.threshold});
        ++record.admitted;
      }
    }
    threshold.end_generation(record.admitted);
    record.mean_complexity = mean_complexity(population);
    mode = pruning_controller(record.mean_complexity, mode, s.pruning);
    record.mode = mode;
    archive.history.push_back(record);

    if (observer) observer(GenerationReport{gen, population, scores, &archive.history.back()});
    if (gen + 1 == s.generations) break;

    // Rank by sparseness (ties by slot) and breed from the extreme quartiles.
    std::vector<std::size_t> order(pop);
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    const std::size_t quartile = std::max<std::size_t>(1, pop / 4);

    std::vector<Genome> next(pop);
    const int child_gen = gen + 1;
    parallel_for(pop, [&](std::size_t slot) {
      Rng rng = Rng::stream(s.seed, {kBreed, static_cast<std::uint64_t>(child_gen), slot});
      const Genome& high = population[order[rng.below(quartile)]];
      const Genome& low = population[order[pop - 1 - rng.below(quartile)]];
      Genome child = crossover(low, high, s.operators.ratio_low, s.operators.p_conn, rng,
                               Birth{genome_id(child_gen, static_cast<int>(slot), s.population_size), child_gen});
      Genome mutated = mutate(child, mode, s.operators.rates, motif_set, s.operators.p_conn, rng);
      next[slot] = std::move(mutated);
    });
    population = std::move(next);
  }
  return archive;
}

}  // namespace anm
