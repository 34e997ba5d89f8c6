#include "sparselv/rng.hpp"

#include <cmath>
#include <numbers>

namespace sparselv {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6A09E667F3BCC908ULL);
  for (std::uint64_t tag : tags) {
    h = mix64(h + kGolden * (tag + 1));
  }
  return h;
}

std::uint64_t random_word(std::uint64_t seed, std::uint64_t counter) noexcept {
  return mix64(mix64(seed) + kGolden * (counter + 1));
}

double uniform_at(std::uint64_t seed, std::uint64_t counter) noexcept {
  return static_cast<double>(random_word(seed, counter) >> 11) * kTwoPow53Inv;
}

double gaussian_at(std::uint64_t seed, std::uint64_t index) noexcept {
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 =
      static_cast<double>((random_word(seed, 2 * index) >> 11) + 1) *
      kTwoPow53Inv;
  const double u2 = uniform_at(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterStream::uniform_index(std::uint64_t bound) noexcept {
  // Rejection on the top of the range removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t w = next_word();
  while (w >= limit) {
    w = next_word();
  }
  return w % bound;
}

}  // namespace sparselv
