#pragma once

// Data-parallel inner loops shared by the loss, gradient and metric code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active table is chosen once at startup from CPUID (override
// with PROTORECON_SIMD=scalar|avx2|auto or select_backend()). The two
// backends agree to within a few ulps; they are not bit-identical, because
// the AVX2 exp is a polynomial approximation and dot() reassociates sums.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace protorecon::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
  Backend backend;
  // out[j] = exp(-(w[j] * x + b[j])^2)
  void (*gaussian_activations)(double x, const double* w, const double* b, double* out,
                               std::size_t n);
  // out[k] = exp(-(center - xs[k])^2 * inv_tau)
  void (*gaussian_distance)(double center, const double* xs, double inv_tau, double* out,
                            std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[k] = exp(in[k]); accurate on [-708.39, 709], flushes to 0 below.
  void (*exp)(const double* in, double* out, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// AVX2/FMA table, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2_table() noexcept;

bool backend_available(Backend b) noexcept;

/// Switch the process-wide backend. Returns false (and leaves the selection
/// unchanged) when the backend is unavailable. Not meant to be called while
/// training threads are running.
bool select_backend(Backend b) noexcept;

Backend active_backend() noexcept;
const KernelTable& active() noexcept;

std::string_view to_string(Backend b) noexcept;
std::optional<Backend> parse_backend(std::string_view name) noexcept;

// Span front-ends over the active table.
void gaussian_activations(double x, std::span<const double> w, std::span<const double> b,
                          std::span<double> out);
void gaussian_distance(double center, std::span<const double> xs, double inv_tau,
                       std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace protorecon::simd
