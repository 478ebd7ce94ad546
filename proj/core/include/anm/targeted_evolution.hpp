#pragma once

#include "anm/genome.hpp"
#include "anm/lif_sim.hpp"
#include "anm/novelty_search.hpp"
#include "anm/stimulus_lab.hpp"

#include <cstdint>
#include <vector>

namespace anm {

struct TargetedSettings {
  int population_size = 20;
  int generations = 30;
  double goal = 0.0;          // stop once the best distance is at or below this
  int tournament_size = 2;
  int initial_motifs = 2;
  PruningThresholds pruning;
  GenomeOperators operators;
  NeuronParams neuron;
  double sample_dt = kDefaultSampleDt;
  std::uint64_t seed = 1;

  friend bool operator==(const TargetedSettings&, const TargetedSettings&) = default;
};

void validate(const TargetedSettings& settings);

/// SPIKE-distance between the genome's output (mean over taps) and the target.
double targeted_fitness(const Genome& genome, const StimulusProgram& stimulus, const SpikeTrain& target,
                        const NeuronParams& params, double sample_dt = kDefaultSampleDt);

struct TargetedResult {
  Genome best;
  double best_distance = 1.0;
  std::vector<double> best_so_far;      // one entry per evaluated generation
  std::vector<double> generation_best;  // best of each generation's population
  std::vector<double> mean_complexity;

  friend bool operator==(const TargetedResult&, const TargetedResult&) = default;
};

/// Generational EA with single-individual elitism and tournament parents; the
/// fitter parent is the crossover's favoured side.
TargetedResult evolve_targeted(const TargetedSettings& settings, const StimulusProgram& stimulus,
                               const SpikeTrain& target, const MotifSet& motif_set);

}  // namespace anm
