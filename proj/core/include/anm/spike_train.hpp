#pragma once

#include <span>
#include <vector>

namespace anm {

/// Ascending spike times (ms) observed over [0, duration).
struct SpikeTrain {
  double duration = 0.0;
  std::vector<double> times;

  SpikeTrain() = default;
  SpikeTrain(double duration_ms, std::vector<double> spike_times)
      : duration(duration_ms), times(std::move(spike_times)) {}

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  /// Number of spikes in [begin, end).
  std::size_t count_in(double begin, double end) const;

  friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;
};

/// Throws ValidationError unless times are strictly increasing within [0, duration).
void validate(const SpikeTrain& train);

}  // namespace anm
