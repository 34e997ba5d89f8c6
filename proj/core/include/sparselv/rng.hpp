#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>

namespace sparselv {

// Counter-based random streams built on the SplitMix64 finalizer. A value is
// a pure function of (seed, counter), so draws do not depend on the order in
// which they are requested or on thread scheduling.

std::uint64_t mix64(std::uint64_t z) noexcept;

/// Derives an independent child seed from a parent seed and a list of tags
/// (kappa index, trial index, ...).
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> tags) noexcept;

/// Raw 64-bit word at position `counter` of the stream keyed by `seed`.
std::uint64_t random_word(std::uint64_t seed, std::uint64_t counter) noexcept;

/// Uniform in [0, 1).
double uniform_at(std::uint64_t seed, std::uint64_t counter) noexcept;

/// Standard normal variate number `index` of the stream (Box-Muller, cosine
/// branch, consuming counters 2*index and 2*index+1).
double gaussian_at(std::uint64_t seed, std::uint64_t index) noexcept;

/// Sequential view over a counter-based stream.
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_word() noexcept { return random_word(seed_, counter_++); }
  double uniform() noexcept { return uniform_at(seed_, counter_++); }
  /// Unbiased integer in [0, bound); bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;
  double gaussian() noexcept { return gaussian_at(seed_, gauss_counter_++); }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  // Gaussians live on a separate lane so mixing calls stays reproducible.
  std::uint64_t gauss_counter_ = std::uint64_t{1} << 62;
};

}  // namespace sparselv
