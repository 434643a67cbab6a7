#include "protorecon/datagen.hpp"

#include <algorithm>
#include <stdexcept>

namespace protorecon {

double min_separation(std::size_t n) {
  if (n < 2) throw std::invalid_argument("min_separation: need at least 2 points");
  return std::min(0.05, 0.5 / static_cast<double>(n));
}

Dataset sample_dataset(std::size_t n, std::uint64_t seed) {
  const double delta = min_separation(n);
  const double span = 1.0 - static_cast<double>(n - 1) * delta;
  Rng rng(seed);
  Dataset d;
  d.x.resize(n);
  d.y.resize(n);
  for (auto& v : d.x) v = rng.uniform(0.0, span);
  std::sort(d.x.begin(), d.x.end());
  for (std::size_t j = 0; j < n; ++j) {
    d.x[j] = std::min(1.0, d.x[j] + static_cast<double>(j) * delta);
  }
  for (auto& v : d.y) v = rng.uniform(0.0, 1.0);
  return d;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string seed_key(const SeedContext& ctx, SeedPurpose purpose) {
  std::string key = std::to_string(ctx.master_seed) + '|' + std::to_string(ctx.n) + '|' +
                    std::to_string(ctx.dataset_id);
  if (purpose == SeedPurpose::init) {
    key += '|' + std::to_string(ctx.init_id);
    if (ctx.literal_tuple) key += '|' + ctx.mask;
  }
  return key;
}

std::uint64_t derive_seed(const SeedContext& ctx, SeedPurpose purpose) {
  return splitmix64_finalize(fnv1a64(seed_key(ctx, purpose)));
}

}  // namespace protorecon
