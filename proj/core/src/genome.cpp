#include "anm/genome.hpp"

#include "anm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace anm {
namespace {

// Slot-local form used while editing: indices survive motif insertion/removal.
struct LocalEdge {
  int src_slot, src_local, dst_slot, dst_local;
  double weight;
};
struct LocalInput {
  int channel, dst_slot, dst_local;
  double weight;
};
struct LocalTap {
  int slot, local;
};
struct LocalGenome {
  std::vector<MotifId> motifs;
  std::vector<LocalEdge> edges;
  std::vector<LocalInput> inputs;
  std::vector<LocalTap> taps;
};

LocalGenome to_local(const Genome& g) {
  const auto d = designations(g.motifs);
  auto split = [&](int global) { const int slot = d.block_of[global]; return std::pair{slot, global - d.offsets[slot]}; };
  LocalGenome l;
  l.motifs = g.motifs;
  for (const auto& e : g.inter_motif_edges) {
    const auto [ss, sl] = split(e.source);
    const auto [ds, dl] = split(e.target);
    l.edges.push_back({ss, sl, ds, dl, e.weight});
  }
  for (const auto& e : g.input_edges) {
    const auto [ds, dl] = split(e.target);
    l.inputs.push_back({e.channel, ds, dl, e.weight});
  }
  for (int tap : g.output_taps) {
    const auto [s, lo] = split(tap);
    l.taps.push_back({s, lo});
  }
  return l;
}

Genome to_global(const LocalGenome& l, GenomeId id, Lineage lineage) {
  Genome g;
  g.motifs = l.motifs;
  g.id = id;
  g.lineage = std::move(lineage);
  const auto offsets = g.block_offsets();
  for (const auto& e : l.edges)
    g.inter_motif_edges.push_back({offsets[e.src_slot] + e.src_local, offsets[e.dst_slot] + e.dst_local, e.weight});
  for (const auto& e : l.inputs)
    g.input_edges.push_back({e.channel, offsets[e.dst_slot] + e.dst_local, e.weight});
  for (const auto& t : l.taps) g.output_taps.push_back(offsets[t.slot] + t.local);
  std::ranges::sort(g.inter_motif_edges, {}, [](const InterMotifEdge& e) { return std::pair{e.source, e.target}; });
  std::ranges::sort(g.input_edges, {}, [](const InputEdge& e) { return std::pair{e.channel, e.target}; });
  return g;
}

void wire_pair(LocalGenome& l, int from, int to, double p_conn, Rng& rng) {
  const auto& src = motif_template(l.motifs[from]);
  const auto& dst = motif_template(l.motifs[to]);
  for (int o : src.outputs())
    for (int i : dst.inputs())
      if (rng.chance(p_conn)) l.edges.push_back({from, o, to, i, rng.nonzero_weight()});
}

void wire_inputs(LocalGenome& l, int slot, double p_conn, Rng& rng) {
  const auto& t = motif_template(l.motifs[slot]);
  for (int c = 0; c < kInputChannels; ++c)
    for (int i : t.inputs())
      if (rng.chance(p_conn)) l.inputs.push_back({c, slot, i, rng.nonzero_weight()});
}

LocalTap random_tap(const std::vector<MotifId>& motifs, Rng& rng) {
  const auto d = designations(motifs);
  const int global = d.outputs[rng.below(d.outputs.size())];
  const int slot = d.block_of[global];
  return {slot, global - d.offsets[slot]};
}

void add_motif(LocalGenome& l, const MotifSet& set, double p_conn, Rng& rng) {
  const int slot = static_cast<int>(l.motifs.size());
  l.motifs.push_back(set[rng.below(set.size())]);
  for (int other = 0; other < slot; ++other) {
    wire_pair(l, other, slot, p_conn, rng);
    wire_pair(l, slot, other, p_conn, rng);
  }
  wire_inputs(l, slot, p_conn, rng);
}

void remove_motif(LocalGenome& l, Rng& rng) {
  const int slot = static_cast<int>(rng.below(l.motifs.size()));
  l.motifs.erase(l.motifs.begin() + slot);
  std::erase_if(l.edges, [&](const LocalEdge& e) { return e.src_slot == slot || e.dst_slot == slot; });
  std::erase_if(l.inputs, [&](const LocalInput& e) { return e.dst_slot == slot; });
  auto shift = [&](int& s) { if (s > slot) --s; };
  for (auto& e : l.edges) {
    shift(e.src_slot);
    shift(e.dst_slot);
  }
  for (auto& e : l.inputs) shift(e.dst_slot);
  for (auto& t : l.taps) {
    if (t.slot == slot) {
      t = random_tap(l.motifs, rng);
    } else {
      shift(t.slot);
    }
  }
}

void replace_motif(LocalGenome& l, const MotifSet& set, double p_conn, Rng& rng) {
  const int slot = static_cast<int>(l.motifs.size() > 1 ? rng.below(l.motifs.size()) : 0);
  const MotifId current = l.motifs[slot];
  std::vector<MotifId> choices;
  for (auto id : set.included())
    if (id != current) choices.push_back(id);
  if (choices.empty()) choices.push_back(current);
  const MotifId next = choices[rng.below(choices.size())];
  const auto& before = motif_template(current);
  const auto& after = motif_template(next);
  l.motifs[slot] = next;

  std::erase_if(l.edges, [&](const LocalEdge& e) {
    return (e.src_slot == slot && !after.is_output(e.src_local)) ||
           (e.dst_slot == slot && !after.is_input(e.dst_local));
  });
  std::erase_if(l.inputs, [&](const LocalInput& e) { return e.dst_slot == slot && !after.is_input(e.dst_local); });

  // Attachment points that did not exist before get freshly rolled edges;
  // points valid under both templates keep their previous wiring state.
  const int count = static_cast<int>(l.motifs.size());
  for (int o : after.outputs()) {
    if (o < before.size && before.is_output(o)) continue;
    for (int other = 0; other < count; ++other) {
      if (other == slot) continue;
      for (int i : motif_template(l.motifs[other]).inputs())
        if (rng.chance(p_conn)) l.edges.push_back({slot, o, other, i, rng.nonzero_weight()});
    }
  }
  for (int i : after.inputs()) {
    if (i < before.size && before.is_input(i)) continue;
    for (int other = 0; other < count; ++other) {
      if (other == slot) continue;
      for (int o : motif_template(l.motifs[other]).outputs())
        if (rng.chance(p_conn)) l.edges.push_back({other, o, slot, i, rng.nonzero_weight()});
    }
    for (int c = 0; c < kInputChannels; ++c)
      if (rng.chance(p_conn)) l.inputs.push_back({c, slot, i, rng.nonzero_weight()});
  }
  for (auto& t : l.taps)
    if (t.slot == slot && !after.is_output(t.local)) t = random_tap(l.motifs, rng);
}

}  // namespace

int Genome::neuron_count() const {
  int n = 0;
  for (auto id : motifs) n += motif_template(id).size;
  return n;
}

std::vector<int> Genome::block_offsets() const {
  std::vector<int> offsets;
  offsets.reserve(motifs.size() + 1);
  int n = 0;
  for (auto id : motifs) {
    offsets.push_back(n);
    n += motif_template(id).size;
  }
  offsets.push_back(n);
  return offsets;
}

Designations designations(std::span<const MotifId> motifs) {
  Designations d;
  int n = 0;
  for (std::size_t slot = 0; slot < motifs.size(); ++slot) {
    const auto& t = motif_template(motifs[slot]);
    d.offsets.push_back(n);
    for (int i = 0; i < t.size; ++i) {
      d.block_of.push_back(static_cast<int>(slot));
      d.is_input.push_back(t.is_input(i));
      d.is_output.push_back(t.is_output(i));
      if (t.is_output(i)) d.outputs.push_back(n + i);
    }
    n += t.size;
  }
  d.offsets.push_back(n);
  return d;
}

void validate(const Genome& g) {
  if (g.motifs.empty()) throw ValidationError("genome has no motifs");
  const auto d = designations(g.motifs);
  const int n = d.offsets.back();
  auto check_weight = [](double w, const char* what) {
    if (!(w != 0.0 && w >= -1.0 && w <= 1.0))
      throw ValidationError(std::string(what) + " weight must be nonzero and within [-1, 1], got " + std::to_string(w));
  };
  for (std::size_t k = 0; k < g.inter_motif_edges.size(); ++k) {
    const auto& e = g.inter_motif_edges[k];
    if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n)
      throw ValidationError("inter-motif edge references neuron outside [0, " + std::to_string(n) + ")");
    if (!d.is_output[e.source])
      throw ValidationError("inter-motif edge source " + std::to_string(e.source) + " is not a designated output");
    if (!d.is_input[e.target])
      throw ValidationError("inter-motif edge target " + std::to_string(e.target) + " is not a designated input");
    if (d.block_of[e.source] == d.block_of[e.target])
      throw ValidationError("inter-motif edge " + std::to_string(e.source) + "->" + std::to_string(e.target) + " stays inside one motif");
    check_weight(e.weight, "inter-motif");
    if (k > 0 && std::pair{g.inter_motif_edges[k - 1].source, g.inter_motif_edges[k - 1].target} >= std::pair{e.source, e.target})
      throw ValidationError("inter-motif edges must be sorted and unique");
  }
  for (std::size_t k = 0; k < g.input_edges.size(); ++k) {
    const auto& e = g.input_edges[k];
    if (e.channel < 0 || e.channel >= kInputChannels)
      throw ValidationError("input edge channel " + std::to_string(e.channel) + " outside [0, 8)");
    if (e.target < 0 || e.target >= n || !d.is_input[e.target])
      throw ValidationError("input edge target " + std::to_string(e.target) + " is not a designated input");
    check_weight(e.weight, "input");
    if (k > 0 && std::pair{g.input_edges[k - 1].channel, g.input_edges[k - 1].target} >= std::pair{e.channel, e.target})
      throw ValidationError("input edges must be sorted and unique");
  }
  if (g.output_taps.empty()) throw ValidationError("genome needs at least one output tap");
  for (int tap : g.output_taps)
    if (tap < 0 || tap >= n || !d.is_output[tap])
      throw ValidationError("output tap " + std::to_string(tap) + " is not a designated output");
}

TiledNetwork tile(const Genome& g, double template_magnitude) {
  TiledNetwork net;
  net.neuron_count = g.neuron_count();
  const auto n = static_cast<std::size_t>(net.neuron_count);
  net.weights.assign(n * n, 0.0);
  net.input_weights.assign(kInputChannels * n, 0.0);
  const auto offsets = g.block_offsets();
  for (std::size_t slot = 0; slot < g.motifs.size(); ++slot) {
    const auto& t = motif_template(g.motifs[slot]);
    const auto off = static_cast<std::size_t>(offsets[slot]);
    for (int i = 0; i < t.size; ++i)
      for (int j = 0; j < t.size; ++j)
        net.weights[(off + i) * n + off + j] = t.sign(i, j) * template_magnitude;
  }
  for (const auto& e : g.inter_motif_edges) net.weights[static_cast<std::size_t>(e.source) * n + e.target] = e.weight;
  for (const auto& e : g.input_edges) net.input_weights[static_cast<std::size_t>(e.channel) * n + e.target] = e.weight;
  net.output_taps = g.output_taps;
  return net;
}

Genome random_genome(Rng& rng, int motif_count, const MotifSet& motif_set, double p_conn, Birth birth,
                     int output_count) {
  if (motif_count < 1) throw ValidationError("motif_count must be at least 1, got " + std::to_string(motif_count));
  if (!(p_conn >= 0.0 && p_conn <= 1.0)) throw ValidationError("p_conn must lie in [0, 1]");
  if (output_count < 1) throw ValidationError("output_count must be at least 1");
  LocalGenome l;
  for (int i = 0; i < motif_count; ++i) l.motifs.push_back(motif_set[rng.below(motif_set.size())]);
  for (int a = 0; a < motif_count; ++a)
    for (int b = 0; b < motif_count; ++b)
      if (a != b) wire_pair(l, a, b, p_conn, rng);
  for (int s = 0; s < motif_count; ++s) wire_inputs(l, s, p_conn, rng);
  for (int k = 0; k < output_count; ++k) l.taps.push_back(random_tap(l.motifs, rng));
  return to_global(l, birth.id, Lineage{birth.generation, {}});
}

Genome crossover(const Genome& parent_low, const Genome& parent_high, double ratio_low, double p_conn, Rng& rng,
                 Birth birth) {
  if (!(ratio_low > 0.0 && ratio_low <= 1.0)) throw ValidationError("ratio_low must lie in (0, 1]");
  const LocalGenome low = to_local(parent_low);
  const LocalGenome high = to_local(parent_high);
  const auto mean = (static_cast<double>(low.motifs.size()) + static_cast<double>(high.motifs.size())) / 2.0;
  const int count = std::max(1, static_cast<int>(std::lround(mean)));

  struct Source {
    bool from_low;
    int instance;
  };
  std::vector<Source> source;
  LocalGenome child;
  for (int s = 0; s < count; ++s) {
    const bool from_low = rng.chance(ratio_low);
    const LocalGenome& p = from_low ? low : high;
    const int inst = static_cast<int>(rng.below(p.motifs.size()));
    source.push_back({from_low, inst});
    child.motifs.push_back(p.motifs[inst]);
  }
  for (int s = 0; s < count; ++s) {
    const LocalGenome& p = source[s].from_low ? low : high;
    for (const auto& e : p.inputs)
      if (e.dst_slot == source[s].instance) child.inputs.push_back({e.channel, s, e.dst_local, e.weight});
  }
  for (int a = 0; a < count; ++a) {
    for (int b = 0; b < count; ++b) {
      if (a == b) continue;
      if (source[a].from_low == source[b].from_low && source[a].instance != source[b].instance) {
        const LocalGenome& p = source[a].from_low ? low : high;
        for (const auto& e : p.edges)
          if (e.src_slot == source[a].instance && e.dst_slot == source[b].instance)
            child.edges.push_back({a, e.src_local, b, e.dst_local, e.weight});
      } else {
        wire_pair(child, a, b, p_conn, rng);
      }
    }
  }
  for (const auto& tap : low.taps) {
    auto it = std::ranges::find_if(source, [&](const Source& s) { return s.from_low && s.instance == tap.slot; });
    if (it != source.end()) {
      child.taps.push_back({static_cast<int>(it - source.begin()), tap.local});
    } else {
      child.taps.push_back(random_tap(child.motifs, rng));
    }
  }
  return to_global(child, birth.id, Lineage{birth.generation, {parent_low.id, parent_high.id}});
}

Genome mutate(const Genome& genome, MutationMode mode, const MutationRates& rates, const MotifSet& motif_set,
              double p_conn, Rng& rng) {
  LocalGenome l = to_local(genome);
  if (mode == MutationMode::normal) {
    if (rng.chance(rates.add_motif)) add_motif(l, motif_set, p_conn, rng);
  } else {
    if (rng.chance(rates.remove_motif) && l.motifs.size() > 1) remove_motif(l, rng);
  }
  if (rng.chance(rates.replace_motif)) replace_motif(l, motif_set, p_conn, rng);
  if (rng.chance(rates.reweight)) {
    const std::size_t total = l.edges.size() + l.inputs.size();
    if (total > 0) {
      const std::size_t k = rng.below(total);
      if (k < l.edges.size()) {
        l.edges[k].weight = rng.nonzero_weight();
      } else {
        l.inputs[k - l.edges.size()].weight = rng.nonzero_weight();
      }
    }
  }
  if (rng.chance(rates.retarget_output) && !l.taps.empty()) {
    const std::size_t k = rng.below(l.taps.size());
    l.taps[k] = random_tap(l.motifs, rng);
  }
  // Edge lists are re-sorted by global index, so traversal order of the edit
  // above never leaks into the result.
  return to_global(l, genome.id, genome.lineage);
}

int complexity(const Genome& genome) {
  int template_edges = 0;
  for (auto id : genome.motifs) template_edges += motif_template(id).edge_count();
  return genome.neuron_count() + template_edges + static_cast<int>(genome.inter_motif_edges.size()) +
         static_cast<int>(genome.input_edges.size()) + static_cast<int>(genome.output_taps.size());
}

double mean_complexity(std::span<const Genome> population) {
  if (population.empty()) throw ValidationError("mean_complexity of an empty population");
  double sum = 0.0;
  for (const auto& g : population) sum += complexity(g);
  return sum / static_cast<double>(population.size());
}

}  // namespace anm
