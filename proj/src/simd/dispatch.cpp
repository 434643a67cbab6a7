#include "kernels_impl.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>

namespace protorecon::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(PROTORECON_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  Backend wanted = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("PROTORECON_SIMD")) {
    if (auto parsed = parse_backend(env); parsed && backend_available(*parsed)) wanted = *parsed;
  }
  if (wanted == Backend::avx2) return avx2_table();
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return detail::kScalarTable; }

const KernelTable* avx2_table() noexcept {
#if defined(PROTORECON_HAVE_AVX2)
  if (cpu_has_avx2()) return &detail::kAvx2Table;
#endif
  return nullptr;
}

bool backend_available(Backend b) noexcept {
  return b == Backend::scalar || avx2_table() != nullptr;
}

bool select_backend(Backend b) noexcept {
  if (!backend_available(b)) return false;
  current().store(b == Backend::avx2 ? avx2_table() : &scalar_table());
  return true;
}

Backend active_backend() noexcept { return active().backend; }

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

std::string_view to_string(Backend b) noexcept {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

std::optional<Backend> parse_backend(std::string_view name) noexcept {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  if (name == "auto") return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  return std::nullopt;
}

void gaussian_activations(double x, std::span<const double> w, std::span<const double> b,
                          std::span<double> out) {
  assert(w.size() == b.size() && out.size() >= w.size());
  active().gaussian_activations(x, w.data(), b.data(), out.data(), w.size());
}

void gaussian_distance(double center, std::span<const double> xs, double inv_tau,
                       std::span<double> out) {
  assert(out.size() >= xs.size());
  active().gaussian_distance(center, xs.data(), inv_tau, out.data(), xs.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

}  // namespace protorecon::simd
