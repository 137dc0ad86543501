#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sleepnet/network.hpp"

namespace sleepnet {

enum class SleepInputMode { FullMean, MaskedMean, ActiveUnion };

/// Sleep-phase parameters. thresholds/synaptic_scales carry one entry per
/// weight layer. n_steps = -1 resolves to 100 * examples-seen, capped at
/// 50000; n_steps = 0 makes run_sleep the identity.
struct SleepConfig {
  double input_rate = 64.0;  // spikes per rate unit at full mean intensity
  double dt = 1e-3;          // timestep length in rate units
  Vec thresholds;
  Vec synaptic_scales;
  double inc_factor = 0.0035;
  double dec_factor = 0.0002;
  std::int64_t n_steps = -1;
  double decay = 0.95;      // membrane decay multiplier per step
  double stdp_beta = 5.0;   // sigmoid sharpness of the soft weight bound
  double w_bound = 1.0;     // soft weight bound
  SleepInputMode input_mode = SleepInputMode::FullMean;
  // > 0: before sleeping, bisect dt so a short plasticity-free dry run fires
  // this many non-input spikes per step (threshold balancing across the
  // network states the conversion produces). 0 uses dt as given.
  double dt_target_spikes = 0.0;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument when the config violates its invariants or
/// does not match a network with n_weight_layers weight matrices.
void validate(const SleepConfig& cfg, std::size_t n_weight_layers);

std::int64_t resolve_sleep_steps(const SleepConfig& cfg, std::uint64_t examples_seen);

using SpikeVec = std::vector<std::uint8_t>;

/// The sleeping twin of a Network. Incoming weights are stored pre-major:
/// weights[l](i, j) is the synapse from neuron i of layer l to neuron j of
/// layer l+1, scaled by scale_record[l] relative to the ANN weights.
struct SpikingNetwork {
  std::vector<std::size_t> arch;
  std::vector<Matrix> weights;      // weights[l]: arch[l] x arch[l+1]
  Vec scale_record;                 // per weight layer: max_act[l] / max_act[l+1]
  std::vector<Vec> membrane;        // per non-input layer
  Vec thresholds;
  Vec synaptic_scales;
  std::vector<SpikeVec> last_spikes;  // per layer (input included), latest lif_step

  std::size_t n_weight_layers() const { return weights.size(); }
};

/// Scales W_l by max_activation[l] / max_activation[l+1] and zeroes all
/// membranes. Rejects stats with a non-positive layer maximum.
SpikingNetwork ann_to_snn(const Network& net, const ActivationStats& stats,
                          const SleepConfig& cfg);

/// Inverts the conversion scaling so STDP deltas land in the ANN weight scale.
Network snn_to_ann(const SpikingNetwork& snn);

/// One timestep of Poisson encoding: unit i spikes with probability
/// min(1, mean_input[i] * input_rate * dt), independently across units.
SpikeVec poisson_encode(const Vec& mean_input, const SleepConfig& cfg,
                        std::mt19937_64& rng);

/// Applies the configured input mode to the normalized mean image
/// (masked_mean needs a square image).
Vec make_sleep_input(const Vec& normalized_mean, const SleepConfig& cfg,
                     std::mt19937_64& rng);

/// One propagation step through all layers: per layer,
/// v <- v*decay + alpha_l * (W_l . x); v > threshold fires and resets to 0.
/// Returns the per-layer spike vectors (input layer first) and records them
/// in snn.last_spikes.
std::vector<SpikeVec> lif_step(SpikingNetwork& snn, const SpikeVec& input_spikes,
                               const SleepConfig& cfg);

/// Sigmoidal weight-dependent STDP on layer l, in place.
/// post & pre   : dw = +inc * sigmoid(-beta*(w - w_bound))
/// post & !pre  : dw = -dec * sigmoid(+beta*(w + w_bound))
/// no post      : dw = 0
/// Updates saturate at w_bound + inc (and -(w_bound + dec) below).
void stdp_update(SpikingNetwork& snn, const SpikeVec& pre, const SpikeVec& post,
                 std::size_t layer, const SleepConfig& cfg);

/// Mean non-input spikes per step of a plasticity-free dry run at the given
/// dt (the calibration observable).
double sleep_spike_rate(const Network& net, const ActivationStats& stats,
                        SleepConfig cfg, double dt, int probe_steps = 300);

/// Deterministic bisection of dt (log-scale) until the dry-run spike rate
/// reaches cfg.dt_target_spikes.
double calibrate_dt(const Network& net, const ActivationStats& stats,
                    const SleepConfig& cfg, int probe_steps = 300);

/// The full sleep phase: convert, run n_steps of encode/propagate/STDP on the
/// Poisson-encoded mean input, convert back. Pure function of its inputs.
Network run_sleep(const Network& net, const ActivationStats& stats,
                  const SleepConfig& cfg);

SleepInputMode input_mode_from_string(const std::string& s);
std::string to_string(SleepInputMode m);

}  // namespace sleepnet
