#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sparselv {

enum class PatternModel { BlockPermutation, Proportional, GeneralRegular, Full };

std::string_view to_string(PatternModel model);
/// Accepts the canonical names (block_permutation, proportional,
/// general_regular, full) and the aliases A / B.
PatternModel parse_pattern_model(std::string_view text);

/// A bijection of {0, ..., m-1}.
class Permutation {
 public:
  /// Throws ConfigError when `mapping` repeats or exceeds an index.
  explicit Permutation(std::vector<std::size_t> mapping);

  static Permutation identity(std::size_t m);
  /// Uniform draw (Fisher-Yates) from a counter-based stream.
  static Permutation random(std::size_t m, std::uint64_t seed);

  std::size_t size() const noexcept { return mapping_.size(); }
  std::size_t operator()(std::size_t i) const { return mapping_[i]; }
  std::span<const std::size_t> mapping() const noexcept { return mapping_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> mapping_;
};

/// How a GeneralRegular / Proportional pattern was produced.
enum class RegularMethod { Direct, Superposition, CyclicFallback };
std::string_view to_string(RegularMethod method);

/// Sparse 0/1 adjacency pattern stored in CSR form. Column indices are
/// ascending within each row, so the flattened position order is the
/// canonical row-major order used for weight indexing.
class AdjacencyPattern {
 public:
  /// Builds a pattern from explicit rows without checking regularity; use
  /// validate_regularity() to check. Rows are sorted; duplicate or
  /// out-of-range columns throw ConfigError.
  static AdjacencyPattern from_rows(std::size_t n, std::size_t d,
                                    PatternModel model, std::uint64_t seed,
                                    std::vector<std::vector<std::size_t>> rows);

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  PatternModel model() const noexcept { return model_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t nnz() const noexcept { return cols_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return offsets_; }
  std::span<const std::size_t> columns() const noexcept { return cols_; }
  std::span<const std::size_t> row(std::size_t i) const {
    return std::span<const std::size_t>(cols_).subspan(
        offsets_[i], offsets_[i + 1] - offsets_[i]);
  }
  bool contains(std::size_t i, std::size_t j) const;

  /// Block-permutation metadata (sigma), when model == BlockPermutation.
  const std::optional<Permutation>& block_permutation() const noexcept {
    return sigma_;
  }
  /// Generating permutations of a superposition pattern (may be empty after
  /// import, where they are not recorded).
  const std::vector<Permutation>& layers() const noexcept { return layers_; }
  RegularMethod method() const noexcept { return method_; }

  /// Same positions, dimensions and model.
  friend bool operator==(const AdjacencyPattern& a, const AdjacencyPattern& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.model_ == b.model_ &&
           a.offsets_ == b.offsets_ && a.cols_ == b.cols_;
  }

 private:
  friend AdjacencyPattern block_permutation_pattern(std::size_t, std::size_t,
                                                    const Permutation&,
                                                    std::uint64_t);
  friend AdjacencyPattern general_regular_pattern(std::size_t, std::size_t,
                                                  std::uint64_t);
  friend AdjacencyPattern proportional_pattern(std::size_t, double,
                                               std::uint64_t);
  friend AdjacencyPattern full_pattern(std::size_t);
  friend AdjacencyPattern import_pattern_text(std::string_view);

  AdjacencyPattern() = default;

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  PatternModel model_ = PatternModel::Full;
  std::uint64_t seed_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> cols_;
  std::optional<Permutation> sigma_;
  std::vector<Permutation> layers_;
  RegularMethod method_ = RegularMethod::Direct;
};

/// Model A: Delta = P_sigma (x) J_d, with n = m * d. `seed` is recorded in the
/// metadata only (the seed sigma was drawn with, or 0).
AdjacencyPattern block_permutation_pattern(std::size_t m, std::size_t d,
                                           const Permutation& sigma,
                                           std::uint64_t seed = 0);

/// Model A with sigma drawn uniformly from S_m.
AdjacencyPattern random_block_permutation_pattern(std::size_t m, std::size_t d,
                                                  std::uint64_t seed);

/// Superposition of d random permutations of [n] with pairwise-disjoint
/// supports. Conflicting rows of a fresh permutation are repaired by random
/// transpositions; if that keeps failing the pattern falls back to the
/// cyclic shifts Delta_{i,(i+k) mod n}, k = 0..d-1 (see method()).
AdjacencyPattern general_regular_pattern(std::size_t n, std::size_t d,
                                         std::uint64_t seed);

/// Model B: d = round(beta * n) clamped to [1, n], generated like
/// general_regular_pattern.
AdjacencyPattern proportional_pattern(std::size_t n, double beta,
                                      std::uint64_t seed);

/// All n^2 positions (d = n).
AdjacencyPattern full_pattern(std::size_t n);

struct RegularityReport {
  bool row_degrees_ok = false;
  bool col_degrees_ok = false;
  std::size_t nnz = 0;
};

RegularityReport validate_regularity(const AdjacencyPattern& p);

/// Text format: header "n d model seed", then one line per row with the
/// ascending zero-based column indices separated by single spaces.
std::string export_pattern_text(const AdjacencyPattern& p);
AdjacencyPattern import_pattern_text(std::string_view text);

}  // namespace sparselv
