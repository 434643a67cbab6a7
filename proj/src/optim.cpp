#include "protorecon/optim.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "protorecon/errors.hpp"

namespace protorecon {

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("train config: epochs must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("train config: lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("train config: betas must lie in [0, 1)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("train config: eps must be positive");
  loss.validate();
}

AdamState::AdamState(std::size_t width) : m(width), v(width) {
  std::fill(m.w.begin(), m.w.end(), 0.0);
  std::fill(v.w.begin(), v.w.end(), 0.0);
}

namespace {

struct AdamCoefficients {
  double beta1, beta2, eps, step, bc2_sqrt;
};

inline void adam_update(double g, double& m, double& v, double& theta, const AdamCoefficients& k) {
  m = k.beta1 * m + (1.0 - k.beta1) * g;
  v = k.beta2 * v + (1.0 - k.beta2) * g * g;
  // lr * m_hat / (sqrt(v_hat) + eps), with both corrections folded into step.
  theta -= k.step * m / (std::sqrt(v) / k.bc2_sqrt + k.eps);
}

}  // namespace

void adam_step(AdamState& state, Params& p, const Gradient& g, const TrainConfig& cfg) {
  const std::size_t h = p.width();
  if (g.da.size() != h || g.dw.size() != h || g.db.size() != h || state.m.width() != h) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  const AdamCoefficients k{cfg.beta1, cfg.beta2, cfg.eps, cfg.lr / bc1, std::sqrt(bc2)};

  for (std::size_t j = 0; j < h; ++j) {
    adam_update(g.da[j], state.m.a[j], state.v.a[j], p.a[j], k);
    adam_update(g.dw[j], state.m.w[j], state.v.w[j], p.w[j], k);
    adam_update(g.db[j], state.m.b[j], state.v.b[j], p.b[j], k);
  }
  adam_update(g.dc, state.m.c, state.v.c, p.c, k);
  project_weights_in_place(p);
}

TrainedRun train_from(const Dataset& d, const TrainConfig& cfg, Params init, std::uint64_t seed) {
  cfg.validate();
  if (init.width() != d.size()) {
    throw std::invalid_argument("train: model width " + std::to_string(init.width()) +
                                " differs from dataset size " + std::to_string(d.size()));
  }
  const auto start = std::chrono::steady_clock::now();
  TrainedRun run;
  run.seed = seed;
  run.final_params = std::move(init);
  project_weights_in_place(run.final_params);
  AdamState state(run.final_params.width());
  if (cfg.record_history) run.history.reserve(static_cast<std::size_t>(cfg.epochs));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto ev = evaluate(run.final_params, d, cfg.loss);
    if (cfg.record_history) run.history.push_back(ev.loss);
    adam_step(state, run.final_params, ev.grad, cfg);
    if (!run.final_params.satisfies_projection()) {
      throw InvariantViolation("train: non-finite parameters or broken projection at epoch " +
                               std::to_string(epoch));
    }
  }
  run.elapsed = std::chrono::steady_clock::now() - start;
  return run;
}

TrainedRun train(const Dataset& d, const TrainConfig& cfg, std::uint64_t seed) {
  if (d.size() == 0) throw std::invalid_argument("train: empty dataset");
  Rng rng(seed);
  return train_from(d, cfg, init_params(d.size(), rng), seed);
}

}  // namespace protorecon
