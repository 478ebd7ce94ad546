#pragma once

#include "anm/genome.hpp"
#include "anm/lif_sim.hpp"
#include "anm/spike_metrics.hpp"
#include "anm/stimulus_lab.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace anm {

/// Complexity hysteresis band of the pruning controller.
struct PruningThresholds {
  double start = 60.0;
  double end = 40.0;

  friend bool operator==(const PruningThresholds&, const PruningThresholds&) = default;
};

struct NoveltySettings {
  int population_size = 100;
  int generations = 50;
  int k_neighbours = 100;
  double p_threshold_initial = 0.5;
  int stagnation_generations = 20;  // generations without an admission before lowering
  int burst_additions = 10;         // admissions that trigger raising ...
  int burst_window = 1;             // ... within this many generations
  double lower_factor = 0.95;
  double raise_factor = 1.20;
  PruningThresholds pruning;
  int initial_motifs = 2;
  GenomeOperators operators;
  NeuronParams neuron;
  double sample_dt = kDefaultSampleDt;
  std::uint64_t seed = 1;

  friend bool operator==(const NoveltySettings&, const NoveltySettings&) = default;
};

void validate(const NoveltySettings& settings);

/// Mean of the k smallest entries of `distances` (all of them when fewer than
/// k exist, 0 when empty).
double sparseness(std::vector<double> distances, int k);

/// Sparseness of row `index` of a distance matrix, self excluded.
double sparseness(std::size_t index, const DistanceMatrix& matrix, int k);

enum class ThresholdTrigger { none, lowered, raised };

struct ThresholdUpdate {
  double threshold = 0.0;
  ThresholdTrigger trigger = ThresholdTrigger::none;
};

/// Dynamic archive threshold. The stagnation rule is checked first.
ThresholdUpdate threshold_update(double threshold, int generations_without_addition, int additions_in_window,
                                 const NoveltySettings& settings);

/// Counter bookkeeping around threshold_update; each trigger resets its counter.
class ThresholdController {
public:
  explicit ThresholdController(const NoveltySettings& settings);

  double threshold() const { return threshold_; }
  int generations_without_addition() const { return without_; }
  int additions_in_window() const;

  /// Records the admissions of one generation and applies the update rule.
  ThresholdTrigger end_generation(int additions);

private:
  NoveltySettings settings_;
  double threshold_;
  int without_ = 0;
  std::vector<int> window_;  // admissions of the most recent generations
};

MutationMode pruning_controller(double mean_complexity, MutationMode current, const PruningThresholds& thresholds);

struct BehaviourRecord {
  GenomeId genome_id = 0;
  std::vector<SpikeTrain> outputs;
  double sparseness = 0.0;
  int generation = 0;

  friend bool operator==(const BehaviourRecord&, const BehaviourRecord&) = default;
};

struct ArchiveEntry {
  Genome genome;
  BehaviourRecord behaviour;
  double threshold_at_admission = 0.0;

  friend bool operator==(const ArchiveEntry&, const ArchiveEntry&) = default;
};

/// Per-generation trace of the search controllers.
struct GenerationRecord {
  int generation = 0;
  double threshold = 0.0;           // threshold used for this generation's admissions
  MutationMode mode = MutationMode::normal;  // mode used to breed the next generation
  double mean_complexity = 0.0;
  int admitted = 0;

  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

struct NoveltyArchive {
  std::vector<ArchiveEntry> entries;
  std::vector<GenerationRecord> history;

  friend bool operator==(const NoveltyArchive&, const NoveltyArchive&) = default;
};

/// Everything an observer may want about one evaluated generation.
struct GenerationReport {
  int generation = 0;
  std::span<const Genome> population;
  std::span<const double> sparseness;
  const GenerationRecord* record = nullptr;
};

using NoveltyObserver = std::function<void(const GenerationReport&)>;

/// Generational novelty search: evaluate, score against population and
/// archive, admit, adapt the threshold and pruning mode, breed a full
/// replacement from a high- and a low-sparseness quartile parent.
NoveltyArchive run_novelty_search(const NoveltySettings& settings, const StimulusProgram& stimulus,
                                  const MotifSet& motif_set, const NoveltyObserver& observer = {});

/// Simulates a genome against the stimulus channels.
std::vector<SpikeTrain> evaluate_behaviour(const Genome& genome, const StimulusProgram& stimulus,
                                           const NeuronParams& params);

}  // namespace anm
