#include "anm/lif_sim.hpp"

#include "anm/error.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace anm {

void validate(const NeuronParams& p) {
  if (!(p.tau > 0.0)) throw ValidationError("tau must be positive");
  if (!(p.dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(p.v_threshold > p.v_reset)) throw ValidationError("v_threshold must exceed v_reset");
  if (p.refractory < 0) throw ValidationError("refractory must be non-negative");
}

SimulationResult simulate(const TiledNetwork& net, std::span<const SpikeTrain> inputs, const NeuronParams& params,
                          const SimulationOptions& options) {
  validate(params);
  if (inputs.size() != static_cast<std::size_t>(kInputChannels))
    throw ValidationError("simulate expects " + std::to_string(kInputChannels) + " input channels, got " +
                          std::to_string(inputs.size()));
  const double duration = inputs.front().duration;
  for (const auto& train : inputs)
    if (train.duration != duration) throw ValidationError("input spike trains must share one duration");

  const int n = net.neuron_count;
  const auto steps = static_cast<long>(std::ceil(duration / params.dt - 1e-9));

  // Per-step spike counts per channel.
  std::vector<std::vector<std::pair<long, int>>> schedule(kInputChannels);
  for (int c = 0; c < kInputChannels; ++c) {
    for (double t : inputs[c].times) {
      const long step = std::lround(t / params.dt);
      if (step < 0 || step >= steps) continue;
      auto& s = schedule[c];
      if (!s.empty() && s.back().first == step) {
        ++s.back().second;
      } else {
        s.emplace_back(step, 1);
      }
    }
  }

  struct Synapse {
    int target;
    double weight;
  };
  std::vector<std::vector<Synapse>> recurrent(n), from_channel(kInputChannels);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (const double w = net.weight(s, t); w != 0.0) recurrent[s].push_back({t, w});
  for (int c = 0; c < kInputChannels; ++c)
    for (int t = 0; t < n; ++t)
      if (const double w = net.input_weight(c, t); w != 0.0) from_channel[c].push_back({t, w});

  const double decay = std::exp(-params.dt / params.tau);
  std::vector<double> v(n, 0.0);
  std::vector<int> refractory_left(n, 0);
  std::vector<int> fired_prev, fired_now;
  std::vector<std::size_t> cursor(kInputChannels, 0);
  std::vector<std::vector<double>> spikes(n);

  SimulationResult result;
  if (options.record_potentials) result.potentials.reserve(static_cast<std::size_t>(steps) * n);

  for (long step = 0; step < steps; ++step) {
    for (auto& x : v) x *= decay;
    for (int c = 0; c < kInputChannels; ++c) {
      auto& k = cursor[c];
      if (k < schedule[c].size() && schedule[c][k].first == step) {
        const int count = schedule[c][k].second;
        for (const auto& syn : from_channel[c]) v[syn.target] += syn.weight * count;
        ++k;
      }
    }
    for (int s : fired_prev)
      for (const auto& syn : recurrent[s]) v[syn.target] += syn.weight;

    if (options.record_potentials) result.potentials.insert(result.potentials.end(), v.begin(), v.end());

    fired_now.clear();
    for (int i = 0; i < n; ++i) {
      if (refractory_left[i] > 0) {
        --refractory_left[i];
        continue;
      }
      if (v[i] >= params.v_threshold) {
        v[i] = params.v_reset;
        refractory_left[i] = params.refractory;
        fired_now.push_back(i);
        spikes[i].push_back(static_cast<double>(step) * params.dt);
      }
    }
    std::swap(fired_prev, fired_now);
  }

  for (int tap : net.output_taps) result.outputs.emplace_back(duration, spikes[tap]);
  if (options.record_all_spikes)
    for (auto& s : spikes) result.neurons.emplace_back(duration, std::move(s));
  return result;
}

std::vector<SpikeTrain> simulate_outputs(const TiledNetwork& net, std::span<const SpikeTrain> inputs,
                                         const NeuronParams& params) {
  return simulate(net, inputs, params).outputs;
}

}  // namespace anm
