#include "sparselv/graph_patterns.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sparselv/errors.hpp"
#include "sparselv/rng.hpp"

namespace sparselv {

std::string_view to_string(PatternModel model) {
  switch (model) {
    case PatternModel::BlockPermutation:
      return "block_permutation";
    case PatternModel::Proportional:
      return "proportional";
    case PatternModel::GeneralRegular:
      return "general_regular";
    case PatternModel::Full:
      return "full";
  }
  return "unknown";
}

PatternModel parse_pattern_model(std::string_view text) {
  if (text == "block_permutation" || text == "A") {
    return PatternModel::BlockPermutation;
  }
  if (text == "proportional" || text == "B") return PatternModel::Proportional;
  if (text == "general_regular") return PatternModel::GeneralRegular;
  if (text == "full") return PatternModel::Full;
  throw ConfigError("unknown pattern model '" + std::string(text) + "'");
}

std::string_view to_string(RegularMethod method) {
  switch (method) {
    case RegularMethod::Direct:
      return "direct";
    case RegularMethod::Superposition:
      return "superposition";
    case RegularMethod::CyclicFallback:
      return "cyclic_fallback";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<std::size_t> mapping)
    : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    const std::size_t v = mapping_[i];
    if (v >= mapping_.size()) {
      throw ConfigError("permutation entry " + std::to_string(i) + " = " +
                        std::to_string(v) + " is out of range [0, " +
                        std::to_string(mapping_.size()) + ")");
    }
    if (seen[v]) {
      throw ConfigError("permutation repeats index " + std::to_string(v));
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t m) {
  std::vector<std::size_t> map(m);
  std::iota(map.begin(), map.end(), std::size_t{0});
  return Permutation(std::move(map));
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t m, CounterStream& rng) {
  std::vector<std::size_t> map(m);
  std::iota(map.begin(), map.end(), std::size_t{0});
  for (std::size_t i = m; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(map[i - 1], map[j]);
  }
  return map;
}

}  // namespace

Permutation Permutation::random(std::size_t m, std::uint64_t seed) {
  CounterStream rng(seed);
  return Permutation(shuffled_indices(m, rng));
}

// ---------------------------------------------------------------------------
// AdjacencyPattern

AdjacencyPattern AdjacencyPattern::from_rows(
    std::size_t n, std::size_t d, PatternModel model, std::uint64_t seed,
    std::vector<std::vector<std::size_t>> rows) {
  if (rows.size() != n) {
    throw ConfigError("pattern needs " + std::to_string(n) + " rows, got " +
                      std::to_string(rows.size()));
  }
  AdjacencyPattern p;
  p.n_ = n;
  p.d_ = d;
  p.model_ = model;
  p.seed_ = seed;
  p.offsets_.reserve(n + 1);
  p.offsets_.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end()) {
      throw ConfigError("row " + std::to_string(i) + " repeats a column");
    }
    if (!r.empty() && r.back() >= n) {
      throw ConfigError("row " + std::to_string(i) + " has column " +
                        std::to_string(r.back()) + " >= n");
    }
    p.cols_.insert(p.cols_.end(), r.begin(), r.end());
    p.offsets_.push_back(p.cols_.size());
  }
  return p;
}

bool AdjacencyPattern::contains(std::size_t i, std::size_t j) const {
  const auto r = row(i);
  return std::binary_search(r.begin(), r.end(), j);
}

AdjacencyPattern block_permutation_pattern(std::size_t m, std::size_t d,
                                           const Permutation& sigma,
                                           std::uint64_t seed) {
  if (m == 0 || d == 0) {
    throw ConfigError("block permutation pattern needs m >= 1 and d >= 1");
  }
  if (sigma.size() != m) {
    throw ConfigError("sigma acts on " + std::to_string(sigma.size()) +
                      " blocks but m = " + std::to_string(m));
  }
  AdjacencyPattern p;
  p.n_ = m * d;
  p.d_ = d;
  p.model_ = PatternModel::BlockPermutation;
  p.seed_ = seed;
  p.offsets_.reserve(p.n_ + 1);
  p.cols_.reserve(p.n_ * d);
  p.offsets_.push_back(0);
  for (std::size_t i = 0; i < p.n_; ++i) {
    const std::size_t first = sigma(i / d) * d;
    for (std::size_t c = 0; c < d; ++c) p.cols_.push_back(first + c);
    p.offsets_.push_back(p.cols_.size());
  }
  p.sigma_ = sigma;
  return p;
}

AdjacencyPattern random_block_permutation_pattern(std::size_t m, std::size_t d,
                                                  std::uint64_t seed) {
  return block_permutation_pattern(m, d, Permutation::random(m, seed), seed);
}

namespace {

// Membership structure for the positions already taken by earlier layers.
class Occupancy {
 public:
  Occupancy(std::size_t n, std::size_t d)
      : n_(n), dense_(n <= kDenseLimit) {
    if (dense_) {
      bits_.assign(n * n, false);
    } else {
      rows_.resize(n);
      for (auto& r : rows_) r.reserve(d);
    }
  }

  bool taken(std::size_t i, std::size_t j) const {
    if (dense_) return bits_[i * n_ + j];
    const auto& r = rows_[i];
    return std::find(r.begin(), r.end(), j) != r.end();
  }

  void take(std::size_t i, std::size_t j) {
    if (dense_) {
      bits_[i * n_ + j] = true;
    } else {
      rows_[i].push_back(j);
    }
  }

 private:
  static constexpr std::size_t kDenseLimit = 16384;
  std::size_t n_;
  bool dense_;
  std::vector<bool> bits_;
  std::vector<std::vector<std::size_t>> rows_;
};

// Tries to turn `perm` into a permutation avoiding all taken positions by
// random transpositions. Returns false when the budget runs out.
bool repair_layer(std::vector<std::size_t>& perm, const Occupancy& occ,
                  CounterStream& rng, std::size_t budget) {
  const std::size_t n = perm.size();
  for (std::size_t i = 0; i < n; ++i) {
    while (occ.taken(i, perm[i])) {
      if (budget == 0) return false;
      --budget;
      const auto j = static_cast<std::size_t>(rng.uniform_index(n));
      if (j == i) continue;
      if (!occ.taken(i, perm[j]) && !occ.taken(j, perm[i])) {
        std::swap(perm[i], perm[j]);
      }
    }
  }
  return true;
}

AdjacencyPattern superposition_pattern(std::size_t n, std::size_t d,
                                       PatternModel model, std::uint64_t seed,
                                       std::vector<Permutation>& layers,
                                       RegularMethod& method) {
  std::vector<std::vector<std::size_t>> rows(n);
  if (d == n) {
    for (auto& r : rows) {
      r.resize(n);
      std::iota(r.begin(), r.end(), std::size_t{0});
    }
    method = RegularMethod::Direct;
    return AdjacencyPattern::from_rows(n, d, model, seed, std::move(rows));
  }

  constexpr std::size_t kAttemptsPerLayer = 32;
  CounterStream rng(seed);
  Occupancy occ(n, d);
  bool ok = true;
  for (std::size_t layer = 0; layer < d && ok; ++layer) {
    ok = false;
    for (std::size_t attempt = 0; attempt < kAttemptsPerLayer; ++attempt) {
      auto perm = shuffled_indices(n, rng);
      if (repair_layer(perm, occ, rng, 64 * n + 1024)) {
        for (std::size_t i = 0; i < n; ++i) {
          occ.take(i, perm[i]);
          rows[i].push_back(perm[i]);
        }
        layers.emplace_back(std::move(perm));
        ok = true;
        break;
      }
    }
  }

  if (ok) {
    method = RegularMethod::Superposition;
    return AdjacencyPattern::from_rows(n, d, model, seed, std::move(rows));
  }

  layers.clear();
  for (auto& r : rows) r.clear();
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<std::size_t> shift(n);
    for (std::size_t i = 0; i < n; ++i) {
      shift[i] = (i + k) % n;
      rows[i].push_back(shift[i]);
    }
    layers.emplace_back(std::move(shift));
  }
  method = RegularMethod::CyclicFallback;
  return AdjacencyPattern::from_rows(n, d, model, seed, std::move(rows));
}

}  // namespace

AdjacencyPattern general_regular_pattern(std::size_t n, std::size_t d,
                                         std::uint64_t seed) {
  if (d == 0 || d > n) {
    throw ConfigError("general regular pattern needs 1 <= d <= n (n = " +
                      std::to_string(n) + ", d = " + std::to_string(d) + ")");
  }
  std::vector<Permutation> layers;
  RegularMethod method{};
  auto p = superposition_pattern(n, d, PatternModel::GeneralRegular, seed,
                                 layers, method);
  p.layers_ = std::move(layers);
  p.method_ = method;
  return p;
}

AdjacencyPattern proportional_pattern(std::size_t n, double beta,
                                      std::uint64_t seed) {
  if (n == 0 || !(beta > 0.0) || beta > 1.0) {
    throw ConfigError("proportional pattern needs n >= 1 and 0 < beta <= 1");
  }
  const auto d = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(beta * static_cast<double>(n))), 1,
      n);
  std::vector<Permutation> layers;
  RegularMethod method{};
  auto p = superposition_pattern(n, d, PatternModel::Proportional, seed,
                                 layers, method);
  p.layers_ = std::move(layers);
  p.method_ = method;
  return p;
}

AdjacencyPattern full_pattern(std::size_t n) {
  if (n == 0) throw ConfigError("full pattern needs n >= 1");
  AdjacencyPattern p;
  p.n_ = n;
  p.d_ = n;
  p.model_ = PatternModel::Full;
  p.offsets_.reserve(n + 1);
  p.cols_.reserve(n * n);
  p.offsets_.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) p.cols_.push_back(j);
    p.offsets_.push_back(p.cols_.size());
  }
  return p;
}

RegularityReport validate_regularity(const AdjacencyPattern& p) {
  RegularityReport report;
  report.nnz = p.nnz();
  std::vector<std::size_t> col_count(p.n(), 0);
  report.row_degrees_ok = true;
  for (std::size_t i = 0; i < p.n(); ++i) {
    const auto r = p.row(i);
    if (r.size() != p.d()) report.row_degrees_ok = false;
    for (std::size_t j : r) ++col_count[j];
  }
  report.col_degrees_ok = std::all_of(
      col_count.begin(), col_count.end(),
      [&](std::size_t c) { return c == p.d(); });
  return report;
}

// ---------------------------------------------------------------------------
// Text format

std::string export_pattern_text(const AdjacencyPattern& p) {
  std::string out;
  out.reserve(16 + p.nnz() * 6);
  out += std::to_string(p.n());
  out += ' ';
  out += std::to_string(p.d());
  out += ' ';
  out += to_string(p.model());
  out += ' ';
  out += std::to_string(p.seed());
  out += '\n';
  for (std::size_t i = 0; i < p.n(); ++i) {
    bool first = true;
    for (std::size_t j : p.row(i)) {
      if (!first) out += ' ';
      out += std::to_string(j);
      first = false;
    }
    out += '\n';
  }
  return out;
}

namespace {

template <typename T>
T parse_number(std::string_view token, std::string_view what) {
  T value{};
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("pattern text: bad " + std::string(what) + " '" +
                      std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t next = line.find(' ', pos);
    const std::size_t stop = next == std::string_view::npos ? line.size() : next;
    if (stop > pos) tokens.push_back(line.substr(pos, stop - pos));
    pos = stop + 1;
  }
  return tokens;
}

}  // namespace

AdjacencyPattern import_pattern_text(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) throw ConfigError("pattern text: missing header");

  const auto header = split_spaces(lines[0]);
  if (header.size() != 4) {
    throw ConfigError("pattern text: header must be 'n d model seed'");
  }
  const auto n = parse_number<std::size_t>(header[0], "n");
  const auto d = parse_number<std::size_t>(header[1], "d");
  const PatternModel model = parse_pattern_model(header[2]);
  const auto seed = parse_number<std::uint64_t>(header[3], "seed");
  if (lines.size() != n + 1) {
    throw ConfigError("pattern text: expected " + std::to_string(n) +
                      " rows, found " + std::to_string(lines.size() - 1));
  }

  std::vector<std::vector<std::size_t>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto token : split_spaces(lines[i + 1])) {
      rows[i].push_back(parse_number<std::size_t>(token, "column"));
    }
  }
  auto p = AdjacencyPattern::from_rows(n, d, model, seed, std::move(rows));

  if (model == PatternModel::BlockPermutation) {
    if (d == 0 || n % d != 0) {
      throw ConfigError("pattern text: block permutation needs d | n");
    }
    const std::size_t m = n / d;
    std::vector<std::size_t> sigma(m);
    for (std::size_t b = 0; b < m; ++b) {
      const auto r = p.row(b * d);
      if (r.empty()) throw ConfigError("pattern text: empty block row");
      sigma[b] = r.front() / d;
    }
    auto expected = block_permutation_pattern(m, d, Permutation(sigma), seed);
    if (!(expected == p)) {
      throw ConfigError("pattern text: rows are not a block permutation");
    }
    return expected;
  }
  if (model == PatternModel::Full && d != n) {
    throw ConfigError("pattern text: full pattern needs d = n");
  }
  return p;
}

}  // namespace sparselv
