#include "protorecon/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "protorecon/datagen.hpp"
#include "protorecon/losses.hpp"

namespace protorecon::theory {

namespace {

double pairs(std::size_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

// Configuration families visited round-robin by the suites.
enum class Regime { uniform, floor_weights, clustered, expelled, count };

Params random_params(std::size_t width, Regime regime, Rng& rng) {
  Params p(width);
  for (std::size_t j = 0; j < width; ++j) {
    p.a[j] = rng.uniform(-2.0, 2.0);
    double mag = regime == Regime::floor_weights ? rng.uniform(kMinAbsWeight, 0.11)
                                                 : rng.uniform(kMinAbsWeight, 5.0);
    p.w[j] = rng.coin() ? -mag : mag;
    double proto = 0.0;
    switch (regime) {
      case Regime::clustered:
        proto = 0.5 + rng.uniform(-1e-3, 1e-3) * (rng.coin() ? 1.0 : 0.0);
        break;
      case Regime::expelled:
        proto = rng.coin() ? rng.uniform(1.0 + 1e-9, 50.0) : rng.uniform(-50.0, -1e-9);
        break;
      default:
        proto = rng.uniform(-3.0, 4.0);
        break;
    }
    p.b[j] = -p.w[j] * proto;
  }
  p.c = rng.uniform(-1.0, 1.0);
  return p;
}

template <typename Check>
BoundReport run_suite(std::size_t configs, std::uint64_t seed, std::size_t max_width, Check&& check) {
  BoundReport report;
  for (std::size_t k = 0; k < configs; ++k) {
    const std::uint64_t config_seed = splitmix64_finalize(seed + 0x9e3779b97f4a7c15ULL * (k + 1));
    Rng rng(config_seed);
    const auto width = 2 + static_cast<std::size_t>(rng.next_u64() % (max_width - 1));
    const auto regime = static_cast<Regime>(k % static_cast<std::size_t>(Regime::count));
    const Dataset d = sample_dataset(width, rng.next_u64());
    Params p = random_params(width, regime, rng);
    const double v = check(p, d, rng);
    ++report.config_count;
    if (v > report.max_violation || report.config_count == 1) {
      report.max_violation = v;
      report.worst_config_seed = config_seed;
    }
  }
  return report;
}

}  // namespace

double BoundCheck::violation() const noexcept {
  return (lhs - rhs) / std::max(1.0, std::abs(rhs));
}

double min_prototype_gap(std::span<const double> protos) {
  std::vector<double> sorted(protos.begin(), protos.end());
  std::sort(sorted.begin(), sorted.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) gap = std::min(gap, sorted[i] - sorted[i - 1]);
  return gap;
}

CoverageCheck check_coverage_monotone(const Params& p, const Dataset& d, std::size_t j,
                                      double eps) {
  if (!(eps > 0.0)) throw std::domain_error("check_coverage_monotone: eps must be positive");
  auto protos = prototypes(p);
  if (j >= protos.size()) throw std::out_of_range("check_coverage_monotone: unit index");
  const double xj = protos[j];
  if (xj >= 0.0 && xj <= 1.0) {
    throw std::domain_error("check_coverage_monotone: prototype lies inside [0,1]");
  }
  CoverageCheck out;
  out.before = coverage_loss(protos, d.x);
  Params moved = p;
  const double target = xj > 1.0 ? xj + eps : xj - eps;
  moved.b[j] = -moved.w[j] * target;
  out.after = coverage_loss(moved, d);
  out.passed = out.after >= out.before - kSlack * std::max(1.0, out.before);
  return out;
}

BoundCheck overlap_bound(const Params& p, const Dataset& d) {
  if (p.width() < 2) throw std::invalid_argument("overlap_bound: need at least two units");
  const auto protos = prototypes(p);
  const double gap = min_prototype_gap(protos);
  double w_min = std::numeric_limits<double>::infinity();
  for (double w : p.w) w_min = std::min(w_min, std::abs(w));
  BoundCheck b;
  b.lhs = overlap_loss(p, d);
  b.rhs = pairs(p.width()) * static_cast<double>(d.size()) *
          std::exp(-w_min * w_min * gap * gap / 2.0);
  return b;
}

BoundCheck separation_bound(const Params& p, double tau) {
  if (p.width() < 2) throw std::invalid_argument("separation_bound: need at least two units");
  if (!(tau > 0.0)) throw std::invalid_argument("separation_bound: tau must be positive");
  const auto protos = prototypes(p);
  const double gap = min_prototype_gap(protos);
  BoundCheck b;
  b.lhs = separation_loss(protos, tau);
  b.rhs = pairs(p.width()) * std::exp(-gap * gap / tau);
  return b;
}

BoundReport coverage_suite(std::size_t configs, std::uint64_t seed, std::size_t max_width) {
  return run_suite(configs, seed, max_width, [](Params& p, const Dataset& d, Rng& rng) {
    auto protos = prototypes(p);
    // Make sure at least one prototype is expelled; pick one at random.
    std::vector<std::size_t> outside;
    for (std::size_t j = 0; j < protos.size(); ++j) {
      if (protos[j] < 0.0 || protos[j] > 1.0) outside.push_back(j);
    }
    if (outside.empty()) {
      const std::size_t j = rng.next_u64() % protos.size();
      p.b[j] = -p.w[j] * (rng.coin() ? 1.0 + rng.uniform(1e-6, 2.0) : -rng.uniform(1e-6, 2.0));
      outside.push_back(j);
    }
    const std::size_t j = outside[rng.next_u64() % outside.size()];
    const double eps = std::pow(10.0, rng.uniform(-9.0, 1.0));
    const auto c = check_coverage_monotone(p, d, j, eps);
    return (c.before - c.after) / std::max(1.0, c.before);
  });
}

BoundReport overlap_suite(std::size_t configs, std::uint64_t seed, std::size_t max_width) {
  return run_suite(configs, seed, max_width, [](Params& p, const Dataset& d, Rng&) {
    return overlap_bound(p, d).violation();
  });
}

BoundReport separation_suite(std::size_t configs, std::uint64_t seed, std::size_t max_width) {
  return run_suite(configs, seed, max_width, [](Params& p, const Dataset&, Rng& rng) {
    const double tau = std::pow(10.0, rng.uniform(-3.0, 1.0));
    return separation_bound(p, tau).violation();
  });
}

}  // namespace protorecon::theory
