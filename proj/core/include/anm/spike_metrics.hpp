#pragma once

#include "anm/spike_train.hpp"

#include <atomic>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace anm {

inline constexpr double kDefaultSampleDt = 0.5;

/// Spikes enclosing an instant t. Both trains are padded with auxiliary
/// spikes at 0 and at the duration. When t falls exactly on a spike,
/// previous = following = t and `isi` is the interval that starts there
/// (the one that ends there when t is the final auxiliary spike).
struct CornerMeasures {
  double previous = 0.0;
  double following = 0.0;
  double isi = 0.0;
};

CornerMeasures corner_measures(const SpikeTrain& train, double t);

/// Mean over trains of t - previous.
double mean_previous_interval(std::span<const CornerMeasures> corners, double t);
/// Mean over trains of following - t.
double mean_following_interval(std::span<const CornerMeasures> corners, double t);
/// Mean over trains of the enclosing inter-spike interval.
double mean_isi(std::span<const CornerMeasures> corners);

/// Instantaneous spike difference S(t) of two trains of equal duration.
double instantaneous_spike_diff(const SpikeTrain& a, const SpikeTrain& b, double t);

/// Sampling step actually used for a pair: `sample_dt`, halved down to below
/// the smallest inter-spike interval present in either train.
double effective_sample_dt(const SpikeTrain& a, const SpikeTrain& b, double sample_dt);

/// Bivariate SPIKE-distance: time average of S(t) using the midpoint
/// rectangle rule on a uniform grid of the effective sample step, normalised
/// by the duration. Evaluated piecewise between spikes, where S(t) is linear,
/// so the cost grows with spike count rather than grid size.
double spike_distance(const SpikeTrain& a, const SpikeTrain& b, double sample_dt = kDefaultSampleDt);

/// Mean spike_distance over paired output taps.
double behaviour_distance(std::span<const SpikeTrain> a, std::span<const SpikeTrain> b,
                          double sample_dt = kDefaultSampleDt);

/// Symmetric matrix of pairwise distances with an exact zero diagonal.
struct DistanceMatrix {
  std::vector<std::string> labels;
  std::size_t n = 0;
  std::vector<double> values;  // row-major n x n

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;
};

/// Counts metric evaluations, for cost accounting.
struct EvaluationCounter {
  std::atomic<std::size_t> evaluations{0};
};

/// Each unordered pair is evaluated once (in parallel) and mirrored.
/// Labels default to "0", "1", ...
DistanceMatrix distance_matrix(std::span<const SpikeTrain> behaviours, double sample_dt = kDefaultSampleDt,
                               std::vector<std::string> labels = {}, EvaluationCounter* counter = nullptr);

/// CSV with labels on the first row and column and six decimal places.
void write_distance_csv(std::ostream& out, const DistanceMatrix& matrix);

}  // namespace anm
