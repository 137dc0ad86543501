#include "sleepnet/snn.hpp"

#include <algorithm>
#include <cmath>

namespace sleepnet {

void validate(const SleepConfig& cfg, std::size_t n_weight_layers) {
  if (cfg.thresholds.size() != n_weight_layers)
    throw std::invalid_argument("sleep config: " + std::to_string(cfg.thresholds.size()) +
                                " thresholds for " + std::to_string(n_weight_layers) +
                                " weight layers");
  if (cfg.synaptic_scales.size() != n_weight_layers)
    throw std::invalid_argument("sleep config: synaptic_scales size mismatch");
  for (double t : cfg.thresholds)
    if (!(t > 0.0)) throw std::invalid_argument("sleep config: thresholds must be positive");
  for (double a : cfg.synaptic_scales)
    if (!(a > 0.0)) throw std::invalid_argument("sleep config: scales must be positive");
  if (cfg.inc_factor < 0.0 || cfg.dec_factor < 0.0)
    throw std::invalid_argument("sleep config: negative plasticity factor");
  if (!(cfg.decay > 0.0 && cfg.decay < 1.0))
    throw std::invalid_argument("sleep config: decay must be in (0,1)");
  if (cfg.n_steps < -1) throw std::invalid_argument("sleep config: bad n_steps");
  if (!(cfg.input_rate >= 0.0) || !(cfg.dt > 0.0))
    throw std::invalid_argument("sleep config: bad input rate or dt");
}

std::int64_t resolve_sleep_steps(const SleepConfig& cfg, std::uint64_t examples_seen) {
  if (cfg.n_steps >= 0) return cfg.n_steps;
  return static_cast<std::int64_t>(std::min<std::uint64_t>(100 * examples_seen, 50000));
}

SpikingNetwork ann_to_snn(const Network& net, const ActivationStats& stats,
                          const SleepConfig& cfg) {
  validate(cfg, net.n_weight_layers());
  if (stats.max_activation.size() != net.arch.size())
    throw std::invalid_argument("ann_to_snn: stats do not match network");
  for (std::size_t l = 0; l < stats.max_activation.size(); ++l)
    if (!(stats.max_activation[l] > 0.0))
      throw std::invalid_argument("ann_to_snn: zero max activation in layer " +
                                  std::to_string(l) + " (train the network first)");

  SpikingNetwork snn;
  snn.arch = net.arch;
  snn.thresholds = cfg.thresholds;
  snn.synaptic_scales = cfg.synaptic_scales;
  for (std::size_t l = 0; l < net.n_weight_layers(); ++l) {
    const double scale = stats.max_activation[l] / stats.max_activation[l + 1];
    snn.scale_record.push_back(scale);
    Matrix wt = net.weights[l].transposed();  // pre-major
    for (double& v : wt.data()) v *= scale;
    snn.weights.push_back(std::move(wt));
    snn.membrane.emplace_back(net.arch[l + 1], 0.0);
  }
  snn.last_spikes.assign(net.arch.size(), {});
  return snn;
}

Network snn_to_ann(const SpikingNetwork& snn) {
  if (snn.scale_record.size() != snn.weights.size())
    throw std::invalid_argument("snn_to_ann: missing scale record");
  Network net;
  net.arch = snn.arch;
  for (std::size_t l = 0; l < snn.weights.size(); ++l) {
    const double scale = snn.scale_record[l];
    if (!(scale > 0.0) && !(scale < 0.0))
      throw std::invalid_argument("snn_to_ann: zero conversion scale in layer " +
                                  std::to_string(l));
    Matrix w = snn.weights[l].transposed();  // back to post-major
    for (double& v : w.data()) v /= scale;
    net.weights.push_back(std::move(w));
  }
  return net;
}

SpikeVec poisson_encode(const Vec& mean_input, const SleepConfig& cfg,
                        std::mt19937_64& rng) {
  SpikeVec spikes(mean_input.size(), 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < mean_input.size(); ++i) {
    if (mean_input[i] < 0.0)
      throw std::invalid_argument("poisson_encode: negative mean input");
    const double p = std::min(1.0, mean_input[i] * cfg.input_rate * cfg.dt);
    if (p > 0.0 && unit(rng) < p) spikes[i] = 1;
  }
  return spikes;
}

Vec make_sleep_input(const Vec& normalized_mean, const SleepConfig& cfg,
                     std::mt19937_64& rng) {
  switch (cfg.input_mode) {
    case SleepInputMode::FullMean:
      return normalized_mean;
    case SleepInputMode::ActiveUnion: {
      Vec mask(normalized_mean.size());
      for (std::size_t i = 0; i < mask.size(); ++i)
        mask[i] = normalized_mean[i] > 0.0 ? 1.0 : 0.0;
      return mask;
    }
    case SleepInputMode::MaskedMean: {
      const int n = static_cast<int>(std::lround(std::sqrt(double(normalized_mean.size()))));
      if (std::size_t(n) * n != normalized_mean.size())
        throw std::invalid_argument("masked_mean sleep input needs a square image");
      // random contiguous square covering ~50% of the area
      const int side = std::max(1, static_cast<int>(std::lround(n * std::sqrt(0.5))));
      std::uniform_int_distribution<int> pos(0, n - side);
      const int r0 = pos(rng), c0 = pos(rng);
      Vec masked(normalized_mean.size(), 0.0);
      for (int r = r0; r < r0 + side; ++r)
        for (int c = c0; c < c0 + side; ++c)
          masked[r * n + c] = normalized_mean[r * n + c];
      return masked;
    }
  }
  throw std::logic_error("unreachable input mode");
}

std::vector<SpikeVec> lif_step(SpikingNetwork& snn, const SpikeVec& input_spikes,
                               const SleepConfig& cfg) {
  if (input_spikes.size() != snn.arch.front())
    throw std::invalid_argument("lif_step: input spike vector size mismatch");

  std::vector<SpikeVec> spikes;
  spikes.reserve(snn.arch.size());
  spikes.push_back(input_spikes);

  for (std::size_t l = 0; l < snn.n_weight_layers(); ++l) {
    const std::size_t n_post = snn.arch[l + 1];
    Vec& v = snn.membrane[l];
    const double alpha = snn.synaptic_scales[l];
    const double threshold = snn.thresholds[l];

    for (double& m : v) m *= cfg.decay;
    const SpikeVec& pre = spikes.back();
    const Matrix& w = snn.weights[l];  // pre-major rows
    for (std::size_t i = 0; i < pre.size(); ++i) {
      if (!pre[i]) continue;
      const double* wrow = w.row(i);
      for (std::size_t j = 0; j < n_post; ++j) v[j] += alpha * wrow[j];
    }

    SpikeVec out(n_post, 0);
    for (std::size_t j = 0; j < n_post; ++j) {
      if (v[j] > threshold) {
        out[j] = 1;
        v[j] = 0.0;
      }
    }
    spikes.push_back(std::move(out));
  }

  snn.last_spikes = spikes;
  return spikes;
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void stdp_update(SpikingNetwork& snn, const SpikeVec& pre, const SpikeVec& post,
                 std::size_t layer, const SleepConfig& cfg) {
  if (layer >= snn.n_weight_layers()) throw std::invalid_argument("stdp_update: bad layer");
  Matrix& w = snn.weights[layer];
  if (pre.size() != w.rows() || post.size() != w.cols())
    throw std::invalid_argument("stdp_update: spike vector size mismatch");

  // Gather spiking post neurons once; rows untouched when nothing fired.
  std::vector<std::size_t> fired;
  for (std::size_t j = 0; j < post.size(); ++j)
    if (post[j]) fired.push_back(j);
  if (fired.empty()) return;

  const double beta = cfg.stdp_beta, bound = cfg.w_bound;
  const double hi = bound + cfg.inc_factor;
  const double lo = -(bound + cfg.dec_factor);
  for (std::size_t i = 0; i < pre.size(); ++i) {
    double* wrow = w.row(i);
    if (pre[i]) {
      for (std::size_t j : fired) {
        const double cur = wrow[j];
        if (cur < hi)
          wrow[j] = std::min(cur + cfg.inc_factor * sigmoid(-beta * (cur - bound)), hi);
      }
    } else {
      for (std::size_t j : fired) {
        const double cur = wrow[j];
        if (cur > lo)
          wrow[j] = std::max(cur - cfg.dec_factor * sigmoid(beta * (cur + bound)), lo);
      }
    }
  }
}

double sleep_spike_rate(const Network& net, const ActivationStats& stats,
                        SleepConfig cfg, double dt, int probe_steps) {
  cfg.dt = dt;
  cfg.inc_factor = 0.0;
  cfg.dec_factor = 0.0;
  SpikingNetwork snn = ann_to_snn(net, stats, cfg);
  std::mt19937_64 rng(mix_seed(cfg.seed, 0x5ca1eULL));
  Vec norm = stats.mean_input;
  for (double& v : norm) v /= stats.max_activation[0];

  double total = 0.0;
  for (int t = 0; t < probe_steps; ++t) {
    const Vec drive = make_sleep_input(norm, cfg, rng);
    const SpikeVec in = poisson_encode(drive, cfg, rng);
    const auto spikes = lif_step(snn, in, cfg);
    for (std::size_t l = 1; l < spikes.size(); ++l)
      for (auto s : spikes[l]) total += s;
  }
  return total / probe_steps;
}

double calibrate_dt(const Network& net, const ActivationStats& stats,
                    const SleepConfig& cfg, int probe_steps) {
  const double target = cfg.dt_target_spikes;
  double lo = std::log(1e-7), hi = std::log(5e-2);
  // rate(dt) is monotone in dt; plain bisection on the log scale
  for (int it = 0; it < 22; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double rate = sleep_spike_rate(net, stats, cfg, std::exp(mid), probe_steps);
    if (rate < target)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

Network run_sleep(const Network& net, const ActivationStats& stats,
                  const SleepConfig& cfg_in) {
  if (resolve_sleep_steps(cfg_in, stats.n_examples_seen) == 0) return net;

  const SleepConfig* active = &cfg_in;
  SleepConfig calibrated;
  if (cfg_in.dt_target_spikes > 0.0) {
    calibrated = cfg_in;
    calibrated.dt = calibrate_dt(net, stats, cfg_in);
    active = &calibrated;
  }
  const SleepConfig& cfg = *active;

  const std::int64_t steps = resolve_sleep_steps(cfg, stats.n_examples_seen);
  if (steps == 0) return net;

  SpikingNetwork snn = ann_to_snn(net, stats, cfg);
  std::mt19937_64 rng(cfg.seed);

  Vec norm_mean = stats.mean_input;
  const double input_max = stats.max_activation[0];
  for (double& v : norm_mean) v /= input_max;

  for (std::int64_t step = 0; step < steps; ++step) {
    const Vec drive = make_sleep_input(norm_mean, cfg, rng);
    const SpikeVec input_spikes = poisson_encode(drive, cfg, rng);
    const std::vector<SpikeVec> spikes = lif_step(snn, input_spikes, cfg);
    for (std::size_t l = 0; l < snn.n_weight_layers(); ++l)
      stdp_update(snn, spikes[l], spikes[l + 1], l, cfg);
  }
  return snn_to_ann(snn);
}

SleepInputMode input_mode_from_string(const std::string& s) {
  if (s == "full_mean") return SleepInputMode::FullMean;
  if (s == "masked_mean") return SleepInputMode::MaskedMean;
  if (s == "active_union") return SleepInputMode::ActiveUnion;
  throw std::invalid_argument("unknown sleep input mode: " + s);
}

std::string to_string(SleepInputMode m) {
  switch (m) {
    case SleepInputMode::FullMean: return "full_mean";
    case SleepInputMode::MaskedMean: return "masked_mean";
    case SleepInputMode::ActiveUnion: return "active_union";
  }
  return "?";
}

}  // namespace sleepnet
