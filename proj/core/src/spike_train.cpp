#include "anm/spike_train.hpp"

#include "anm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace anm {

std::size_t SpikeTrain::count_in(double begin, double end) const {
  const auto lo = std::ranges::lower_bound(times, begin);
  const auto hi = std::ranges::lower_bound(times, end);
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

void validate(const SpikeTrain& train) {
  if (!(train.duration >= 0.0) || !std::isfinite(train.duration))
    throw ValidationError("spike train duration must be finite and non-negative");
  for (std::size_t i = 0; i < train.times.size(); ++i) {
    const double t = train.times[i];
    if (!(t >= 0.0 && t < train.duration))
      throw ValidationError("spike time " + std::to_string(t) + " outside [0, " + std::to_string(train.duration) + ")");
    if (i > 0 && !(train.times[i - 1] < t)) throw ValidationError("spike times must be strictly increasing");
  }
}

}  // namespace anm
