#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "protorecon/assignment.hpp"
#include "protorecon/model.hpp"

namespace protorecon {

struct RunMetrics {
  double recon_error = 0.0;      // E
  double specialization = 0.0;   // S
  double expelled_frac = 0.0;
  double hull_dist_mean = 0.0;
  std::vector<double> mean_activations;  // per unit, in unit order
};

/// (1/N) min over permutations of sum_i |x_i - x_hat_pi(i)| + |y_i - y_hat_pi(i)|.
/// Throws std::invalid_argument when sizes differ.
double reconstruction_error(const Dataset& d, const Reconstruction& r);

/// Fraction of distinct units chosen as some input's nearest prototype.
double specialization_ratio(const Dataset& d, std::span<const double> protos);

/// Fraction of prototypes strictly outside [0, 1].
double expelled_fraction(std::span<const double> protos);

/// Mean distance of the prototypes from [min xs, max xs]; zero inside.
double hull_distance_mean(std::span<const double> protos, std::span<const double> xs);

/// (1/N) sum_i exp(-(w_j x_i + b_j)^2).
double mean_activation(const Params& p, const Dataset& d, std::size_t j);

RunMetrics compute_metrics(const Params& p, const Dataset& d);

}  // namespace protorecon
