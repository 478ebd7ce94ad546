#pragma once

#include "anm/motif_library.hpp"
#include "anm/random.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace anm {

inline constexpr int kInputChannels = 8;

using GenomeId = std::uint64_t;

/// Synapse between motifs. `source` and `target` are global neuron indices,
/// i.e. positions in the concatenation of motif blocks in list order.
struct InterMotifEdge {
  int source = 0;
  int target = 0;
  double weight = 0.0;

  friend bool operator==(const InterMotifEdge&, const InterMotifEdge&) = default;
};

/// Synapse from an external input channel onto a global neuron.
struct InputEdge {
  int channel = 0;
  int target = 0;
  double weight = 0.0;

  friend bool operator==(const InputEdge&, const InputEdge&) = default;
};

struct Lineage {
  int generation = 0;
  std::vector<GenomeId> parents;

  friend bool operator==(const Lineage&, const Lineage&) = default;
};

/// Identity stamped onto a newly created genome.
struct Birth {
  GenomeId id = 0;
  int generation = 0;
};

/// The evolvable microcircuit description. Edge lists are kept sorted by
/// (source, target) and (channel, target) with no duplicate pairs.
struct Genome {
  std::vector<MotifId> motifs;
  std::vector<InterMotifEdge> inter_motif_edges;
  std::vector<InputEdge> input_edges;
  std::vector<int> output_taps;
  GenomeId id = 0;
  Lineage lineage;

  int neuron_count() const;
  /// First global neuron index of each motif block, plus a trailing total.
  std::vector<int> block_offsets() const;

  friend bool operator==(const Genome&, const Genome&) = default;
};

/// Global-index view of the attachment points of a genome.
struct Designations {
  std::vector<int> offsets;           // per motif block, plus trailing total
  std::vector<int> block_of;          // global neuron -> motif slot
  std::vector<bool> is_input;         // global neuron is a designated input
  std::vector<bool> is_output;        // global neuron is a designated output
  std::vector<int> outputs;           // all designated outputs, ascending
};

Designations designations(std::span<const MotifId> motifs);

/// Throws ValidationError describing the first violated invariant.
void validate(const Genome& genome);

/// Dense network obtained by placing motif templates on the block diagonal and
/// inter-motif weights elsewhere. `weights[source * neuron_count + target]`.
struct TiledNetwork {
  int neuron_count = 0;
  std::vector<double> weights;
  std::vector<double> input_weights;  // kInputChannels x neuron_count, row = channel
  std::vector<int> output_taps;

  double weight(int source, int target) const { return weights[static_cast<std::size_t>(source) * neuron_count + target]; }
  double input_weight(int channel, int target) const { return input_weights[static_cast<std::size_t>(channel) * neuron_count + target]; }
};

TiledNetwork tile(const Genome& genome, double template_magnitude = 1.0);

struct MutationRates {
  double add_motif = 0.35;
  double remove_motif = 0.40;
  double replace_motif = 0.75;
  double reweight = 0.60;
  double retarget_output = 0.60;

  friend bool operator==(const MutationRates&, const MutationRates&) = default;
};

enum class MutationMode { normal, pruning };

/// Parameters shared by every operator that wires new edges.
struct GenomeOperators {
  double p_conn = 0.25;
  double ratio_low = 0.6;
  int output_count = 1;
  MutationRates rates;

  friend bool operator==(const GenomeOperators&, const GenomeOperators&) = default;
};

Genome random_genome(Rng& rng, int motif_count, const MotifSet& motif_set, double p_conn,
                     Birth birth, int output_count = 1);

/// Child of a low-sparseness and a high-sparseness parent. Each motif slot
/// comes from `parent_low` with probability `ratio_low`.
Genome crossover(const Genome& parent_low, const Genome& parent_high, double ratio_low,
                 double p_conn, Rng& rng, Birth birth);

/// Applies each mutation independently with its rate. Identity and lineage
/// are left untouched; callers stamp them.
Genome mutate(const Genome& genome, MutationMode mode, const MutationRates& rates,
              const MotifSet& motif_set, double p_conn, Rng& rng);

/// neurons + template edges + inter-motif edges + input edges + output taps.
int complexity(const Genome& genome);

double mean_complexity(std::span<const Genome> population);

}  // namespace anm
