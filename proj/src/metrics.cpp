#include "protorecon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "protorecon/losses.hpp"
#include "protorecon/simd/kernels.hpp"

namespace protorecon {

double reconstruction_error(const Dataset& d, const Reconstruction& r) {
  const std::size_t n = d.size();
  if (r.size() != n || r.y_hat.size() != n) {
    throw std::invalid_argument("reconstruction_error: dataset and reconstruction sizes differ");
  }
  if (n == 0) return 0.0;
  CostMatrix cost(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cost(i, j) = std::abs(d.x[i] - r.x_hat[j]) + std::abs(d.y[i] - r.y_hat[j]);
    }
  }
  return assign_min_cost(cost).total / static_cast<double>(n);
}

double specialization_ratio(const Dataset& d, std::span<const double> protos) {
  if (protos.empty()) return 0.0;
  std::vector<char> chosen(protos.size(), 0);
  for (double xi : d.x) chosen[nearest_prototype(xi, protos)] = 1;
  const auto distinct = std::count(chosen.begin(), chosen.end(), 1);
  return static_cast<double>(distinct) / static_cast<double>(protos.size());
}

double expelled_fraction(std::span<const double> protos) {
  if (protos.empty()) return 0.0;
  const auto outside =
      std::count_if(protos.begin(), protos.end(), [](double v) { return v < 0.0 || v > 1.0; });
  return static_cast<double>(outside) / static_cast<double>(protos.size());
}

double hull_distance_mean(std::span<const double> protos, std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("hull_distance_mean: no inputs");
  if (protos.empty()) return 0.0;
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it, hi = *hi_it;
  double total = 0.0;
  for (double v : protos) total += std::max({0.0, lo - v, v - hi});
  return total / static_cast<double>(protos.size());
}

double mean_activation(const Params& p, const Dataset& d, std::size_t j) {
  if (j >= p.width()) throw std::out_of_range("mean_activation: unit index out of range");
  std::vector<double> z(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double arg = p.w[j] * d.x[i] + p.b[j];
    z[i] = -arg * arg;
  }
  std::vector<double> out(d.size());
  simd::active().exp(z.data(), out.data(), out.size());
  double total = 0.0;
  for (double s : out) total += s;
  return total / static_cast<double>(d.size());
}

RunMetrics compute_metrics(const Params& p, const Dataset& d) {
  RunMetrics m;
  const auto protos = prototypes(p);
  m.recon_error = reconstruction_error(d, reconstruct(p));
  m.specialization = specialization_ratio(d, protos);
  m.expelled_frac = expelled_fraction(protos);
  m.hull_dist_mean = hull_distance_mean(protos, d.x);
  m.mean_activations.resize(p.width());
  for (std::size_t j = 0; j < p.width(); ++j) m.mean_activations[j] = mean_activation(p, d, j);
  return m;
}

}  // namespace protorecon
