#pragma once

// Numeric checks of three structural facts about the losses:
//  * moving an already-expelled prototype further out never lowers coverage;
//  * overlap <= C(H,2) * N * exp(-w_min^2 * gap^2 / 2);
//  * separation <= C(H,2) * exp(-gap^2 / tau);
// where gap is the minimum pairwise prototype distance and w_min = min |w_j|.

#include <cstddef>
#include <cstdint>
#include <span>

#include "protorecon/model.hpp"

namespace protorecon::theory {

/// Slack allowed on every check, relative to max(1, |rhs|).
inline constexpr double kSlack = 1e-12;

struct CoverageCheck {
  double before = 0.0;
  double after = 0.0;
  bool passed = false;  // after >= before - slack
};

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  /// (lhs - rhs) / max(1, |rhs|); <= kSlack means the bound holds.
  double violation() const noexcept;
  bool holds() const noexcept { return violation() <= kSlack; }
};

struct BoundReport {
  std::size_t config_count = 0;
  double max_violation = -1.0;  // worst violation seen; <= 0 when every check passed
  std::uint64_t worst_config_seed = 0;
  bool passed() const noexcept { return config_count > 0 && max_violation <= kSlack; }
};

/// Minimum |x_j - x_k| over j != k; +inf for fewer than two prototypes.
double min_prototype_gap(std::span<const double> protos);

/// Moves prototype j by eps further from [0, 1] by resetting b_j and
/// compares coverage before and after. Throws std::domain_error when the
/// prototype lies inside [0, 1] or eps <= 0.
CoverageCheck check_coverage_monotone(const Params& p, const Dataset& d, std::size_t j,
                                      double eps);

/// Throws std::invalid_argument for width < 2.
BoundCheck overlap_bound(const Params& p, const Dataset& d);
BoundCheck separation_bound(const Params& p, double tau);

/// Random and adversarial configurations (projection-floor weights,
/// near-coincident prototypes, far-expelled prototypes), reproducible from
/// `seed`. Widths are drawn from [2, max_width].
BoundReport coverage_suite(std::size_t configs, std::uint64_t seed, std::size_t max_width = 30);
BoundReport overlap_suite(std::size_t configs, std::uint64_t seed, std::size_t max_width = 30);
BoundReport separation_suite(std::size_t configs, std::uint64_t seed, std::size_t max_width = 30);

}  // namespace protorecon::theory
