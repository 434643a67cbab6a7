#pragma once

// Width-N Gaussian MLP: f(x) = sum_j a_j exp(-(w_j x + b_j)^2) + c.
// Each hidden unit peaks at its prototype x_hat_j = -b_j / w_j.

#include <cstddef>
#include <span>
#include <vector>

#include "protorecon/rng.hpp"

namespace protorecon {

/// Projection floor on |w_j|; keeps the prototype map well defined.
inline constexpr double kMinAbsWeight = 0.1;

struct Params {
  std::vector<double> a;  // output weights
  std::vector<double> w;  // hidden weights
  std::vector<double> b;  // hidden biases
  double c = 0.0;         // output bias

  Params() = default;
  explicit Params(std::size_t width) : a(width, 0.0), w(width, 1.0), b(width, 0.0) {}

  std::size_t width() const noexcept { return w.size(); }

  /// Shapes agree and every entry is finite.
  bool is_well_formed() const noexcept;
  /// is_well_formed() and |w_j| >= kMinAbsWeight for all j.
  bool satisfies_projection() const noexcept;

  friend bool operator==(const Params&, const Params&) = default;
};

/// Sorted training pairs in [0, 1]^2.
struct Dataset {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const noexcept { return x.size(); }

  /// Throws std::invalid_argument describing the first broken invariant:
  /// equal lengths, values in [0, 1], and x_{i+1} - x_i >= min_gap (checked
  /// with 1e-12 slack). Pass min_gap = 0 to require only strict increase.
  void validate(double min_gap) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Prototype pairs (x_hat_j, f(x_hat_j)), ascending in x_hat.
struct Reconstruction {
  std::vector<double> x_hat;
  std::vector<double> y_hat;
  std::vector<std::size_t> unit;  // original hidden-unit index of each pair

  std::size_t size() const noexcept { return x_hat.size(); }
};

/// a, b, c ~ U(-0.1, 0.1); |w| ~ U[0.1, 1) with a fair-coin sign.
/// Draw order: a[0..n), then (sign, magnitude) per w_j, then b[0..n), then c.
Params init_params(std::size_t n, Rng& rng);

double forward(const Params& p, double x);

/// Unsorted prototypes in unit order. Throws InvariantViolation if some
/// |w_j| < kMinAbsWeight.
std::vector<double> prototypes(const Params& p);

Reconstruction reconstruct(const Params& p);

/// Raises every |w_j| below the floor to the floor, keeping its sign; w_j = 0
/// goes to +kMinAbsWeight.
Params project_weights(Params p);
void project_weights_in_place(Params& p) noexcept;

}  // namespace protorecon
