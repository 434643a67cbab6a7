#pragma once

// Synthetic datasets with a minimum input separation, and the seed
// derivation that pairs every mask comparison on the same dataset and
// initialization.
//
// Seed byte layout (stable across versions): the ASCII decimal fields
//   dataset seed:  "<master>|<n>|<dataset_id>"
//   init seed:     "<master>|<n>|<dataset_id>|<init_id>"
//   init seed, literal tuple mode: "<master>|<n>|<dataset_id>|<init_id>|<mask>"
// hashed with 64-bit FNV-1a and passed through the splitmix64 finalizer.

#include <cstdint>
#include <string>
#include <string_view>

#include "protorecon/model.hpp"

namespace protorecon {

/// delta_n = min(0.05, 0.5 / n). Throws std::invalid_argument for n < 2.
double min_separation(std::size_t n);

/// Draws n x-values on [0, 1 - (n-1) delta_n], sorts them, shifts the j-th
/// by j * delta_n, then draws n y-values on [0, 1] in order.
Dataset sample_dataset(std::size_t n, std::uint64_t seed);

enum class SeedPurpose { dataset, init };

struct SeedContext {
  std::uint64_t master_seed = 0;
  std::size_t n = 0;
  std::size_t dataset_id = 0;
  std::size_t init_id = 0;
  std::string mask = "000";
  /// Include the mask in the init seed (unpairs the ablation).
  bool literal_tuple = false;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept;

/// The canonical string hashed by derive_seed.
std::string seed_key(const SeedContext& ctx, SeedPurpose purpose);
std::uint64_t derive_seed(const SeedContext& ctx, SeedPurpose purpose);

}  // namespace protorecon
