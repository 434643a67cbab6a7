#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "protorecon/losses.hpp"
#include "protorecon/model.hpp"

namespace protorecon {

struct TrainConfig {
  int epochs = 200;
  double lr = 1e-3;
  LossConfig loss;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  bool record_history = false;

  void validate() const;
};

/// First/second moment accumulators shaped like Params, plus the step count.
struct AdamState {
  Params m;
  Params v;
  long long t = 0;

  AdamState() = default;
  explicit AdamState(std::size_t width);
};

struct TrainedRun {
  Params final_params;
  std::vector<LossBreakdown> history;  // loss before each step, when recorded
  std::uint64_t seed = 0;
  std::chrono::nanoseconds elapsed{0};
};

/// One bias-corrected Adam update followed by weight projection.
void adam_step(AdamState& state, Params& p, const Gradient& g, const TrainConfig& cfg);

/// Initializes from `seed` and takes cfg.epochs full-batch Adam steps.
/// Throws std::invalid_argument when the dataset size differs from the width
/// the model would get (width is always d.size()).
TrainedRun train(const Dataset& d, const TrainConfig& cfg, std::uint64_t seed);

/// Same, starting from caller-provided parameters.
TrainedRun train_from(const Dataset& d, const TrainConfig& cfg, Params init, std::uint64_t seed = 0);

}  // namespace protorecon
