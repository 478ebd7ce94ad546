#pragma once

#include "anm/spike_metrics.hpp"
#include "anm/stimulus_lab.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace anm {

struct StimulusFitness {
  double fitness = 0.0;     // mean pairwise ideal-response distance
  int over_threshold = 0;   // unordered pairs at or above the threshold

  friend bool operator==(const StimulusFitness&, const StimulusFitness&) = default;
};

StimulusFitness stimulus_fitness(const StimulusProgram& stimulus, double sample_dt = kDefaultSampleDt,
                                 double threshold = 0.5, EvaluationCounter* counter = nullptr);

struct StimulusOptSettings {
  int population_size = 10;
  int generations = 100;
  std::size_t min_length = 255;
  std::size_t max_length = 5100;
  double elite_fraction = 0.25;
  double mutation_rate = 0.15;  // per pattern
  double threshold = 0.5;
  EncodingParams encoding;
  double sample_dt = kDefaultSampleDt;
  std::uint64_t seed = 1;

  friend bool operator==(const StimulusOptSettings&, const StimulusOptSettings&) = default;
};

void validate(const StimulusOptSettings& settings);

struct StimulusOptResult {
  std::vector<std::uint8_t> best;
  StimulusFitness best_fitness;
  std::vector<StimulusFitness> best_so_far;  // one entry per generation
  std::vector<std::size_t> lengths_seen_min;  // shortest individual per generation
  std::vector<std::size_t> lengths_seen_max;  // longest individual per generation
  std::size_t fitness_evaluations = 0;

  friend bool operator==(const StimulusOptResult&, const StimulusOptResult&) = default;
};

/// Elitist EA over byte-pattern sequences maximising ideal-response separation.
/// Elites survive unchanged and keep their cached fitness.
StimulusOptResult optimize_stimulus(const StimulusOptSettings& settings);

/// Child of two pattern sequences: the first half follows parent `a`, the
/// second half parent `b`, each sampled at proportional positions.
std::vector<std::uint8_t> symmetric_crossover(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                                              std::size_t length);

}  // namespace anm
