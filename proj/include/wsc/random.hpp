#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "wsc/complex.hpp"

namespace wsc {

/// Seeded random source with platform-independent output.
///
/// The engine is std::mt19937_64 (fully specified by the standard); the
/// uniform, normal and integer transforms are implemented here because the
/// standard library distributions are implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream derived from (master seed, stream name, index).
  static Rng stream(std::uint64_t master, std::string_view name, std::uint64_t index = 0);

  /// First 64-bit output of stream(master, name, index); used to seed sub-generators.
  static std::uint64_t derive_seed(std::uint64_t master, std::string_view name, std::uint64_t index = 0);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (lo, hi].
  double uniform(double lo, double hi);
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// k distinct indices from [0, n), in draw order.
  std::vector<Index> sample_without_replacement(Index n, Index k);

  Vector normal_vector(Index n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace wsc
