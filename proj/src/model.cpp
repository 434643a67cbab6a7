#include "protorecon/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "protorecon/errors.hpp"
#include "protorecon/simd/kernels.hpp"

namespace protorecon {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); });
}

}  // namespace

bool Params::is_well_formed() const noexcept {
  return !w.empty() && a.size() == w.size() && b.size() == w.size() && all_finite(a) &&
         all_finite(w) && all_finite(b) && std::isfinite(c);
}

bool Params::satisfies_projection() const noexcept {
  return is_well_formed() &&
         std::all_of(w.begin(), w.end(), [](double e) { return std::abs(e) >= kMinAbsWeight; });
}

void Dataset::validate(double min_gap) const {
  constexpr double slack = 1e-12;
  if (x.size() != y.size()) throw std::invalid_argument("dataset: x and y lengths differ");
  if (x.empty()) throw std::invalid_argument("dataset: empty");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0) || !(y[i] >= 0.0 && y[i] <= 1.0)) {
      throw std::invalid_argument("dataset: value outside [0,1] at index " + std::to_string(i));
    }
    if (i > 0) {
      if (!(x[i] > x[i - 1])) {
        throw std::invalid_argument("dataset: x not strictly increasing at index " +
                                    std::to_string(i));
      }
      if (x[i] - x[i - 1] < min_gap - slack) {
        throw std::invalid_argument("dataset: gap below minimum separation at index " +
                                    std::to_string(i));
      }
    }
  }
}

Params init_params(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("init_params: width must be at least 1");
  Params p(n);
  for (auto& v : p.a) v = rng.uniform(-0.1, 0.1);
  for (auto& v : p.w) {
    const bool negative = rng.coin();
    const double magnitude = rng.uniform(kMinAbsWeight, 1.0);
    v = negative ? -magnitude : magnitude;
  }
  for (auto& v : p.b) v = rng.uniform(-0.1, 0.1);
  p.c = rng.uniform(-0.1, 0.1);
  return p;
}

double forward(const Params& p, double x) {
  std::vector<double> act(p.width());
  simd::gaussian_activations(x, p.w, p.b, act);
  return simd::dot(p.a, act) + p.c;
}

std::vector<double> prototypes(const Params& p) {
  std::vector<double> out(p.width());
  for (std::size_t j = 0; j < p.width(); ++j) {
    if (!(std::abs(p.w[j]) >= kMinAbsWeight)) {
      throw InvariantViolation("prototypes: |w[" + std::to_string(j) +
                               "]| below projection floor; project_weights must run first");
    }
    out[j] = -p.b[j] / p.w[j];
  }
  return out;
}

Reconstruction reconstruct(const Params& p) {
  const auto protos = prototypes(p);
  Reconstruction r;
  r.unit.resize(protos.size());
  std::iota(r.unit.begin(), r.unit.end(), std::size_t{0});
  std::stable_sort(r.unit.begin(), r.unit.end(),
                   [&](std::size_t i, std::size_t j) { return protos[i] < protos[j]; });
  r.x_hat.reserve(protos.size());
  r.y_hat.reserve(protos.size());
  for (auto j : r.unit) {
    r.x_hat.push_back(protos[j]);
    r.y_hat.push_back(forward(p, protos[j]));
  }
  return r;
}

void project_weights_in_place(Params& p) noexcept {
  for (auto& v : p.w) {
    if (std::abs(v) < kMinAbsWeight) v = std::signbit(v) && v != 0.0 ? -kMinAbsWeight : kMinAbsWeight;
  }
}

Params project_weights(Params p) {
  project_weights_in_place(p);
  return p;
}

}  // namespace protorecon
