#include "sparselv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sparselv/errors.hpp"
#include "sparselv/reports.hpp"

namespace sparselv {

std::size_t SweepConfig::degree() const {
  switch (model) {
    case PatternModel::Full:
      return n;
    case PatternModel::Proportional:
      if (beta > 0.0) {
        const auto rounded =
            static_cast<std::size_t>(std::llround(beta * static_cast<double>(n)));
        return std::clamp<std::size_t>(rounded, 1, n);
      }
      return d;
    default:
      return d;
  }
}

void SweepConfig::validate() const {
  if (n < 2) throw ConfigError("n must be >= 2");
  const std::size_t deg = degree();
  if (deg == 0 || deg > n) throw ConfigError("d must satisfy 1 <= d <= n");
  if (model == PatternModel::BlockPermutation && n % deg != 0) {
    throw ConfigError("block_permutation needs d to divide n (n = " +
                      std::to_string(n) + ", d = " + std::to_string(deg) + ")");
  }
  if (beta < 0.0 || beta > 1.0) throw ConfigError("beta must lie in [0, 1]");
  if (kappa_grid.empty()) throw ConfigError("kappa_grid must not be empty");
  for (double k : kappa_grid) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw ConfigError("kappa_grid values must be positive");
    }
  }
  if (trials_per_point == 0) throw ConfigError("trials_per_point must be >= 1");
  if (!(solve_tol > 0.0) || !(norm_tol > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(x0 > 0.0)) throw ConfigError("x0 must be positive");
  if (sample_count < 2) throw ConfigError("sample_count must be >= 2");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw ConfigError("rel_tol and abs_tol must be positive");
  }
  if (bins == 0) throw ConfigError("bins must be >= 1");
  if (threads == 0) throw ConfigError("threads must be >= 1");
  if (format != "csv" && format != "json") {
    throw ConfigError("format must be csv or json");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                      std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected a boolean");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto stop = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_value<double>(key, trim(text.substr(pos, stop - pos))));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

using Setter = std::function<void(SweepConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
#define SPARSELV_NUMBER(field, type)                                   \
  t[#field] = [](SweepConfig& c, std::string_view k, std::string_view v) { \
    c.field = parse_value<type>(k, v);                                  \
  }
    SPARSELV_NUMBER(n, std::size_t);
    SPARSELV_NUMBER(d, std::size_t);
    SPARSELV_NUMBER(beta, double);
    SPARSELV_NUMBER(trials_per_point, std::size_t);
    SPARSELV_NUMBER(master_seed, std::uint64_t);
    SPARSELV_NUMBER(solve_tol, double);
    SPARSELV_NUMBER(solve_max_iterations, std::size_t);
    SPARSELV_NUMBER(norm_tol, double);
    SPARSELV_NUMBER(t_end, double);
    SPARSELV_NUMBER(x0, double);
    SPARSELV_NUMBER(sample_count, std::size_t);
    SPARSELV_NUMBER(traced_species, std::size_t);
    SPARSELV_NUMBER(rel_tol, double);
    SPARSELV_NUMBER(abs_tol, double);
    SPARSELV_NUMBER(bins, std::size_t);
    SPARSELV_NUMBER(threads, std::size_t);
#undef SPARSELV_NUMBER
    t["model"] = [](SweepConfig& c, std::string_view, std::string_view v) {
      c.model = parse_pattern_model(v);
    };
    t["kappa_grid"] = [](SweepConfig& c, std::string_view k, std::string_view v) {
      c.kappa_grid = parse_list(k, v);
    };
    t["snapshot_times"] = [](SweepConfig& c, std::string_view k,
                             std::string_view v) {
      c.snapshot_times = parse_list(k, v);
    };
    t["fix_pattern"] = [](SweepConfig& c, std::string_view k, std::string_view v) {
      c.fix_pattern = parse_bool(k, v);
    };
    t["zero_interactions"] = [](SweepConfig& c, std::string_view k,
                                std::string_view v) {
      c.zero_interactions = parse_bool(k, v);
    };
    t["out_dir"] = [](SweepConfig& c, std::string_view, std::string_view v) {
      c.out_dir = std::string(v);
    };
    t["format"] = [](SweepConfig& c, std::string_view, std::string_view v) {
      c.format = std::string(v);
    };
    return t;
  }();
  return table;
}

}  // namespace

SweepConfig parse_config(std::string_view text, SweepConfig base) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    auto sep = line.find('=');
    if (sep == std::string_view::npos) sep = line.find(':');
    if (sep == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, sep));
    const auto value = trim(line.substr(sep + 1));
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + std::string(key) + "'");
    }
    it->second(base, key, value);
  }
  return base;
}

SweepConfig load_config_file(const std::filesystem::path& path,
                             SweepConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

std::string render_config(const SweepConfig& c) {
  const auto list = [](const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) out += ',';
      out += format_number(xs[i]);
    }
    return out;
  };
  std::ostringstream out;
  out << "n = " << c.n << '\n'
      << "d = " << c.d << '\n'
      << "beta = " << format_number(c.beta) << '\n'
      << "model = " << to_string(c.model) << '\n'
      << "kappa_grid = " << list(c.kappa_grid) << '\n'
      << "trials_per_point = " << c.trials_per_point << '\n'
      << "master_seed = " << c.master_seed << '\n'
      << "fix_pattern = " << (c.fix_pattern ? "true" : "false") << '\n'
      << "zero_interactions = " << (c.zero_interactions ? "true" : "false") << '\n'
      << "solve_tol = " << format_number(c.solve_tol) << '\n'
      << "solve_max_iterations = " << c.solve_max_iterations << '\n'
      << "norm_tol = " << format_number(c.norm_tol) << '\n'
      << "t_end = " << format_number(c.t_end) << '\n'
      << "x0 = " << format_number(c.x0) << '\n'
      << "sample_count = " << c.sample_count << '\n'
      << "traced_species = " << c.traced_species << '\n'
      << "snapshot_times = " << list(c.snapshot_times) << '\n'
      << "rel_tol = " << format_number(c.rel_tol) << '\n'
      << "abs_tol = " << format_number(c.abs_tol) << '\n'
      << "bins = " << c.bins << '\n'
      << "threads = " << c.threads << '\n'
      << "out_dir = " << c.out_dir << '\n'
      << "format = " << c.format << '\n';
  return out.str();
}

}  // namespace sparselv
