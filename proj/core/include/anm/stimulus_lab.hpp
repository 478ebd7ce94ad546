#pragma once

#include "anm/genome.hpp"
#include "anm/spike_metrics.hpp"
#include "anm/spike_train.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anm {

enum class BitOrder { lsb_first, msb_first };

/// Burst encoding of one byte per window: every set bit drives its channel
/// with `burst_ms * spike_rate` evenly spaced spikes from the window start.
struct EncodingParams {
  double window_ms = 50.0;
  double burst_ms = 25.0;
  int spike_rate = 1;  // spikes per ms
  BitOrder bit_order = BitOrder::lsb_first;

  friend bool operator==(const EncodingParams&, const EncodingParams&) = default;
};

void validate(const EncodingParams& params);

/// Channel driven by `bit` (0 = least significant).
int channel_for_bit(int bit, BitOrder order);

/// Human readable name used in reports: SPACE, COMMA, STOP, DASH, printable
/// characters as themselves, anything else as 0xHH.
std::string pattern_label(std::uint8_t pattern);

struct StimulusProgram {
  std::vector<std::uint8_t> patterns;
  EncodingParams params;
  std::vector<SpikeTrain> trains;                                  // one per input channel
  std::map<std::uint8_t, std::vector<std::size_t>> alphabet;       // pattern -> occurrence windows

  double duration() const { return static_cast<double>(patterns.size()) * params.window_ms; }

  friend bool operator==(const StimulusProgram&, const StimulusProgram&) = default;
};

/// Rejects zero bytes.
StimulusProgram encode_patterns(std::span<const std::uint8_t> patterns, const EncodingParams& params = {});

/// One window per character; rejects characters that do not encode to a
/// single non-zero UTF-8 byte, reporting the character position.
StimulusProgram encode_text(std::string_view text, const EncodingParams& params = {});

/// Recovers the byte sequence from channel trains.
std::vector<std::uint8_t> decode_patterns(std::span<const SpikeTrain> trains, const EncodingParams& params);

/// A train bursting (input burst shape) in each of the given windows.
SpikeTrain burst_train(std::span<const std::size_t> windows, const EncodingParams& params, double duration);

/// Hypothetical perfect recogniser output for each alphabet pattern.
std::map<std::uint8_t, SpikeTrain> ideal_responses(const StimulusProgram& stimulus);

struct Separability {
  std::vector<std::uint8_t> patterns;  // alphabet order, matches matrix rows
  DistanceMatrix matrix;
  std::vector<int> over_threshold;     // partners at distance >= threshold
  double threshold = 0.5;
};

Separability separability(const StimulusProgram& stimulus, double threshold = 0.5,
                          double sample_dt = kDefaultSampleDt, EvaluationCounter* counter = nullptr);

enum class Correlation { none, weak, strong };

Correlation classify_correlation(double mean_spikes);
std::string_view correlation_name(Correlation c);

struct PatternCorrelation {
  std::uint8_t pattern = 0;
  std::size_t instances = 0;
  double mean_spikes = 0.0;
  Correlation correlation = Correlation::none;
};

using CorrelationReport = std::vector<PatternCorrelation>;

/// Mean number of output spikes inside the windows of each alphabet pattern.
CorrelationReport correlation_report(const SpikeTrain& output, const StimulusProgram& stimulus);

enum class MakeupGrouping { overall, by_generation };

struct MakeupGroup {
  int generation = -1;                 // -1 for the overall group
  std::size_t motif_instances = 0;
  std::map<MotifId, double> percent;   // shares summing to 100
};

std::vector<MakeupGroup> motif_makeup(std::span<const Genome> entries, MakeupGrouping grouping);

}  // namespace anm
