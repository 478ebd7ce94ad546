#pragma once

#include "anm/genome.hpp"
#include "anm/spike_train.hpp"

#include <span>
#include <vector>

namespace anm {

/// Leaky integrate-and-fire parameters. Times in ms, potentials dimensionless.
struct NeuronParams {
  double tau = 25.0;
  double v_threshold = 1.5;
  double v_reset = 0.0;
  int refractory = 1;  // steps during which a neuron that just fired cannot fire
  double dt = 1.0;

  friend bool operator==(const NeuronParams&, const NeuronParams&) = default;
};

void validate(const NeuronParams& params);

struct SimulationResult {
  std::vector<SpikeTrain> outputs;  // one per output tap
  std::vector<SpikeTrain> neurons;  // every neuron, when requested
  /// Membrane potential after integration, step-major (step * N + neuron),
  /// when requested.
  std::vector<double> potentials;
};

struct SimulationOptions {
  bool record_all_spikes = false;
  bool record_potentials = false;
};

/// Discrete-time simulation. Each step every potential decays by exp(-dt/tau),
/// then receives input-channel spikes of the same step and recurrent spikes
/// emitted on the previous step (one-step synaptic delay). A neuron fires when
/// its potential reaches threshold outside its refractory window and is then
/// reset. `inputs` must hold exactly kInputChannels trains of equal duration.
SimulationResult simulate(const TiledNetwork& net, std::span<const SpikeTrain> inputs, const NeuronParams& params,
                          const SimulationOptions& options = {});

/// Output trains of the tapped neurons only.
std::vector<SpikeTrain> simulate_outputs(const TiledNetwork& net, std::span<const SpikeTrain> inputs,
                                         const NeuronParams& params);

}  // namespace anm
