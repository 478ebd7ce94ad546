#include "anm/stimulus_lab.hpp"

#include "anm/error.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace anm {
namespace {

// Burst spike offsets within a window.
std::vector<double> burst_offsets(const EncodingParams& p) {
  std::vector<double> offsets;
  const auto spikes = static_cast<long>(std::lround(p.burst_ms * p.spike_rate));
  for (long k = 0; k < spikes; ++k) offsets.push_back(static_cast<double>(k) / p.spike_rate);
  return offsets;
}

}  // namespace

void validate(const EncodingParams& p) {
  if (!(p.window_ms > 0.0)) throw ValidationError("window_ms must be positive");
  if (!(p.burst_ms > 0.0 && p.burst_ms <= p.window_ms)) throw ValidationError("burst_ms must lie in (0, window_ms]");
  if (p.spike_rate < 1) throw ValidationError("spike_rate must be a positive integer");
  const double spikes = p.burst_ms * p.spike_rate;
  if (std::abs(spikes - std::round(spikes)) > 1e-9) throw ValidationError("burst_ms * spike_rate must be an integer");
}

int channel_for_bit(int bit, BitOrder order) { return order == BitOrder::lsb_first ? bit : kInputChannels - 1 - bit; }

std::string pattern_label(std::uint8_t pattern) {
  switch (pattern) {
    case ' ': return "SPACE";
    case ',': return "COMMA";
    case '.': return "STOP";
    case '-': return "DASH";
    case '"': return "QUOTE";
    default: break;
  }
  if (pattern > 0x20 && pattern < 0x7f) return std::string(1, static_cast<char>(pattern));
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02X", pattern);
  return buf;
}

SpikeTrain burst_train(std::span<const std::size_t> windows, const EncodingParams& params, double duration) {
  const auto offsets = burst_offsets(params);
  SpikeTrain train;
  train.duration = duration;
  train.times.reserve(windows.size() * offsets.size());
  for (auto w : windows) {
    const double start = static_cast<double>(w) * params.window_ms;
    for (double o : offsets) train.times.push_back(start + o);
  }
  return train;
}

StimulusProgram encode_patterns(std::span<const std::uint8_t> patterns, const EncodingParams& params) {
  validate(params);
  StimulusProgram s;
  s.params = params;
  s.patterns.assign(patterns.begin(), patterns.end());
  std::vector<std::vector<std::size_t>> channel_windows(kInputChannels);
  for (std::size_t j = 0; j < patterns.size(); ++j) {
    const auto p = patterns[j];
    if (p == 0) throw ValidationError("pattern at position " + std::to_string(j) + " is zero");
    s.alphabet[p].push_back(j);
    for (int bit = 0; bit < 8; ++bit)
      if (p & (1u << bit)) channel_windows[channel_for_bit(bit, params.bit_order)].push_back(j);
  }
  for (const auto& windows : channel_windows) s.trains.push_back(burst_train(windows, params, s.duration()));
  return s;
}

StimulusProgram encode_text(std::string_view text, const EncodingParams& params) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto b = static_cast<std::uint8_t>(text[i]);
    if (b == 0 || b >= 0x80)
      throw ValidationError("character at position " + std::to_string(bytes.size()) +
                            " does not encode to a single non-zero UTF-8 byte");
    bytes.push_back(b);
  }
  return encode_patterns(bytes, params);
}

std::vector<std::uint8_t> decode_patterns(std::span<const SpikeTrain> trains, const EncodingParams& params) {
  validate(params);
  if (trains.size() != static_cast<std::size_t>(kInputChannels))
    throw ValidationError("decoding expects " + std::to_string(kInputChannels) + " channels");
  const auto windows = static_cast<std::size_t>(std::lround(trains.front().duration / params.window_ms));
  std::vector<std::uint8_t> out(windows, 0);
  for (std::size_t j = 0; j < windows; ++j) {
    const double start = static_cast<double>(j) * params.window_ms;
    for (int bit = 0; bit < 8; ++bit)
      if (trains[channel_for_bit(bit, params.bit_order)].count_in(start, start + params.burst_ms) > 0)
        out[j] |= static_cast<std::uint8_t>(1u << bit);
  }
  return out;
}

std::map<std::uint8_t, SpikeTrain> ideal_responses(const StimulusProgram& stimulus) {
  std::map<std::uint8_t, SpikeTrain> out;
  for (const auto& [pattern, windows] : stimulus.alphabet)
    out.emplace(pattern, burst_train(windows, stimulus.params, stimulus.duration()));
  return out;
}

Separability separability(const StimulusProgram& stimulus, double threshold, double sample_dt,
                          EvaluationCounter* counter) {
  if (stimulus.alphabet.empty()) throw ValidationError("separability needs a non-empty alphabet");
  const auto ideals = ideal_responses(stimulus);
  Separability result;
  result.threshold = threshold;
  std::vector<SpikeTrain> trains;
  std::vector<std::string> labels;
  for (const auto& [pattern, train] : ideals) {
    result.patterns.push_back(pattern);
    trains.push_back(train);
    labels.push_back(pattern_label(pattern));
  }
  result.matrix = distance_matrix(trains, sample_dt, std::move(labels), counter);
  result.over_threshold.assign(trains.size(), 0);
  for (std::size_t i = 0; i < trains.size(); ++i)
    for (std::size_t j = 0; j < trains.size(); ++j)
      if (i != j && result.matrix(i, j) >= threshold) ++result.over_threshold[i];
  return result;
}

Correlation classify_correlation(double mean_spikes) {
  if (mean_spikes <= 0.0) return Correlation::none;
  return mean_spikes < 1.0 ? Correlation::weak : Correlation::strong;
}

std::string_view correlation_name(Correlation c) {
  switch (c) {
    case Correlation::none: return "none";
    case Correlation::weak: return "weak";
    case Correlation::strong: return "strong";
  }
  return "?";
}

CorrelationReport correlation_report(const SpikeTrain& output, const StimulusProgram& stimulus) {
  if (output.duration != stimulus.duration())
    throw ValidationError("output duration " + std::to_string(output.duration) + " does not match stimulus duration " +
                          std::to_string(stimulus.duration()));
  CorrelationReport report;
  const double w = stimulus.params.window_ms;
  for (const auto& [pattern, windows] : stimulus.alphabet) {
    std::size_t spikes = 0;
    for (auto j : windows) spikes += output.count_in(static_cast<double>(j) * w, static_cast<double>(j + 1) * w);
    PatternCorrelation row;
    row.pattern = pattern;
    row.instances = windows.size();
    row.mean_spikes = static_cast<double>(spikes) / static_cast<double>(windows.size());
    row.correlation = classify_correlation(row.mean_spikes);
    report.push_back(row);
  }
  return report;
}

std::vector<MakeupGroup> motif_makeup(std::span<const Genome> entries, MakeupGrouping grouping) {
  if (entries.empty()) throw ValidationError("motif makeup of an empty catalogue");
  std::map<int, std::map<MotifId, std::size_t>> counts;
  for (const auto& g : entries) {
    const int key = grouping == MakeupGrouping::overall ? -1 : g.lineage.generation;
    auto& bucket = counts[key];
    for (auto id : g.motifs) ++bucket[id];
  }
  std::vector<MakeupGroup> groups;
  for (const auto& [generation, bucket] : counts) {
    MakeupGroup group;
    group.generation = generation;
    for (const auto& [id, c] : bucket) group.motif_instances += c;
    for (const auto& [id, c] : bucket)
      group.percent[id] = 100.0 * static_cast<double>(c) / static_cast<double>(group.motif_instances);
    groups.push_back(std::move(group));
  }
  return groups;
}

}  // namespace anm
