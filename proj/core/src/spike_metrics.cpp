#include "anm/spike_metrics.hpp"

#include "anm/csv.hpp"
#include "anm/error.hpp"
#include "anm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

namespace anm {
namespace {

void require_pair(const SpikeTrain& a, const SpikeTrain& b) {
  if (a.duration != b.duration)
    throw ValidationError("spike trains must share one duration (" + std::to_string(a.duration) + " vs " +
                          std::to_string(b.duration) + ")");
  if (!(a.duration > 0.0)) throw ValidationError("spike trains must have a positive duration");
}

double smallest_isi(const SpikeTrain& train) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < train.times.size(); ++i) m = std::min(m, train.times[i] - train.times[i - 1]);
  return m;
}

// Walks the spikes of one train, padded with auxiliary spikes at 0 and the
// duration, alongside an increasing sequence of knots.
class PaddedCursor {
public:
  explicit PaddedCursor(const SpikeTrain& train) : train_(train) {
    first_ = (!train.times.empty() && train.times.front() == 0.0) ? 1 : 0;
  }

  std::size_t size() const { return train_.times.size() - first_ + 2; }

  double at(std::size_t k) const {
    if (k == 0) return 0.0;
    if (k == size() - 1) return train_.duration;
    return train_.times[first_ + k - 1];
  }

  // Positions on the last padded spike <= t.
  void advance_to(double t) {
    while (index_ + 1 < size() && at(index_ + 1) <= t) ++index_;
  }

  double previous() const { return at(index_); }
  double following_after() const { return at(std::min(index_ + 1, size() - 1)); }

private:
  const SpikeTrain& train_;
  std::size_t first_ = 0;
  std::size_t index_ = 0;
};

// S(t) for a point strictly between spikes, from enclosing spike times.
double spike_diff_between(double pa, double fa, double pb, double fb, double t) {
  const double dp = std::abs(pa - pb);
  const double df = std::abs(fa - fb);
  const double xp = ((t - pa) + (t - pb)) / 2.0;
  const double xf = ((fa - t) + (fb - t)) / 2.0;
  const double isi = ((fa - pa) + (fb - pb)) / 2.0;
  return (dp * xf + df * xp) / (isi * isi);
}

}  // namespace

CornerMeasures corner_measures(const SpikeTrain& train, double t) {
  if (!(train.duration > 0.0)) throw ValidationError("corner measures need a positive duration");
  if (!(t >= 0.0 && t <= train.duration))
    throw ValidationError("time " + std::to_string(t) + " outside [0, " + std::to_string(train.duration) + "]");
  PaddedCursor cursor(train);
  const auto& times = train.times;
  // Index into the padded sequence of the last spike <= t.
  const std::size_t offset = (!times.empty() && times.front() == 0.0) ? 1 : 0;
  std::size_t k;
  if (t >= train.duration) {
    k = cursor.size() - 1;
  } else {
    const auto it = std::ranges::upper_bound(times.begin() + static_cast<long>(offset), times.end(), t);
    k = static_cast<std::size_t>(it - (times.begin() + static_cast<long>(offset)));
  }
  const double prev = cursor.at(k);
  if (prev == t) {
    const double isi = (k + 1 < cursor.size()) ? cursor.at(k + 1) - prev : prev - cursor.at(k - 1);
    return {t, t, isi};
  }
  const double next = cursor.at(k + 1);
  return {prev, next, next - prev};
}

double mean_previous_interval(std::span<const CornerMeasures> corners, double t) {
  double sum = 0.0;
  for (const auto& c : corners) sum += t - c.previous;
  return sum / static_cast<double>(corners.size());
}

double mean_following_interval(std::span<const CornerMeasures> corners, double t) {
  double sum = 0.0;
  for (const auto& c : corners) sum += c.following - t;
  return sum / static_cast<double>(corners.size());
}

double mean_isi(std::span<const CornerMeasures> corners) {
  double sum = 0.0;
  for (const auto& c : corners) sum += c.isi;
  return sum / static_cast<double>(corners.size());
}

double instantaneous_spike_diff(const SpikeTrain& a, const SpikeTrain& b, double t) {
  require_pair(a, b);
  const CornerMeasures corners[2] = {corner_measures(a, t), corner_measures(b, t)};
  const double dp = std::abs(corners[0].previous - corners[1].previous);
  const double df = std::abs(corners[0].following - corners[1].following);
  const double xp = mean_previous_interval(corners, t);
  const double xf = mean_following_interval(corners, t);
  const double isi = mean_isi(corners);
  return (dp * xf + df * xp) / (isi * isi);
}

double effective_sample_dt(const SpikeTrain& a, const SpikeTrain& b, double sample_dt) {
  if (!(sample_dt > 0.0) || !std::isfinite(sample_dt)) throw ValidationError("sample_dt must be positive");
  const double isi = std::min(smallest_isi(a), smallest_isi(b));
  double h = sample_dt;
  while (h >= isi) h /= 2.0;
  return h;
}

double spike_distance(const SpikeTrain& a, const SpikeTrain& b, double sample_dt) {
  require_pair(a, b);
  const double duration = a.duration;
  const double h = effective_sample_dt(a, b, sample_dt);

  // Cells [i h, (i + 1) h) sampled at their midpoints; the last cell may be
  // partial. Between consecutive spikes of either train S(t) is linear, so the
  // sum over the midpoints inside a piece equals count * S(mean midpoint).
  const auto full_cells = static_cast<long>(std::floor(duration / h));
  const double covered = static_cast<double>(full_cells) * h;
  auto midpoint = [h](long i) { return (static_cast<double>(i) + 0.5) * h; };

  PaddedCursor ca(a), cb(b);
  double total = 0.0;
  double knot = 0.0;
  while (knot < duration) {
    ca.advance_to(knot);
    cb.advance_to(knot);
    const double next = std::min(ca.following_after(), cb.following_after());

    // Midpoint sitting exactly on this knot: evaluate with the on-spike rule.
    if (const long i = std::lround(knot / h - 0.5); i >= 0 && i < full_cells && midpoint(i) == knot)
      total += h * instantaneous_spike_diff(a, b, knot);

    long lo = std::max<long>(0, static_cast<long>(std::floor(knot / h - 0.5)));
    while (lo > 0 && midpoint(lo - 1) > knot) --lo;
    while (midpoint(lo) <= knot) ++lo;
    long hi = std::min<long>(full_cells - 1, static_cast<long>(std::ceil(next / h - 0.5)));
    while (hi >= lo && midpoint(hi) >= next) --hi;
    while (hi + 1 < full_cells && midpoint(hi + 1) < next) ++hi;
    if (hi >= lo) {
      const long count = hi - lo + 1;
      const double centre = (midpoint(lo) + midpoint(hi)) / 2.0;
      total += h * static_cast<double>(count) *
               spike_diff_between(ca.previous(), ca.following_after(), cb.previous(), cb.following_after(), centre);
    }
    knot = next;
  }

  if (covered < duration) {
    const double width = duration - covered;
    total += width * instantaneous_spike_diff(a, b, covered + width / 2.0);
  }
  return total / duration;
}

double behaviour_distance(std::span<const SpikeTrain> a, std::span<const SpikeTrain> b, double sample_dt) {
  if (a.size() != b.size() || a.empty())
    throw ValidationError("behaviours must have the same, non-zero number of output trains");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += spike_distance(a[i], b[i], sample_dt);
  return sum / static_cast<double>(a.size());
}

DistanceMatrix distance_matrix(std::span<const SpikeTrain> behaviours, double sample_dt,
                               std::vector<std::string> labels, EvaluationCounter* counter) {
  if (behaviours.empty()) throw ValidationError("distance matrix needs at least one behaviour");
  for (const auto& b : behaviours)
    if (b.duration != behaviours.front().duration) throw ValidationError("behaviours have mixed durations");
  const std::size_t n = behaviours.size();
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  } else if (labels.size() != n) {
    throw ValidationError("label count does not match behaviour count");
  }

  DistanceMatrix m;
  m.labels = std::move(labels);
  m.n = n;
  m.values.assign(n * n, 0.0);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    m.values[i * n + j] = spike_distance(behaviours[i], behaviours[j], sample_dt);
    if (counter) counter->evaluations.fetch_add(1, std::memory_order_relaxed);
  });
  for (const auto& [i, j] : pairs) m.values[j * n + i] = m.values[i * n + j];
  return m;
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& matrix) {
  out << "label";
  for (const auto& l : matrix.labels) out << ',' << csv_field(l);
  out << '\n';
  out << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < matrix.n; ++i) {
    out << csv_field(matrix.labels[i]);
    for (std::size_t j = 0; j < matrix.n; ++j) out << ',' << matrix(i, j);
    out << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace anm
