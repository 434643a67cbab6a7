#include "kernels_impl.hpp"

#include <cmath>

namespace protorecon::simd::detail {

namespace {

void gaussian_activations_scalar(double x, const double* w, const double* b, double* out,
                                 std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double z = std::fma(w[j], x, b[j]);
    out[j] = std::exp(-z * z);
  }
}

void gaussian_distance_scalar(double center, const double* xs, double inv_tau, double* out,
                              std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double d = center - xs[k];
    out[k] = std::exp(-d * d * inv_tau);
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void exp_scalar(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(in[i]);
}

}  // namespace

const KernelTable kScalarTable{
    Backend::scalar,
    &gaussian_activations_scalar,
    &gaussian_distance_scalar,
    &dot_scalar,
    &exp_scalar,
};

}  // namespace protorecon::simd::detail
