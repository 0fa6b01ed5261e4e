#pragma once

// Run configuration for gribov_lab. Every setting has a key (used in config
// files) and a flag spelled with dashes: j_max <-> --j-max. Resolution order
// is defaults, then the config file, then flags.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "gribov/errors.hpp"
#include "gribov/sturm.hpp"
#include "gribov/trace_formula.hpp"

namespace gribov::cli {

inline constexpr std::string_view kSchemaVersion = "gribov-lab/1";
inline constexpr const char* kConfigEnv = "GRIBOV_LAB_CONFIG";

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command;
  GribovParams<double> params{1, 1, 0};
  std::uint64_t m_lo{3};
  std::uint64_t m_hi{10};
  DimPolicy dim_policy{};
  std::size_t quad_nodes{1024};
  int j_max{4};
  OutputFormat format{OutputFormat::csv};
  std::string output_path;  ///< empty: standard output
  std::uint64_t seed{20240601};

  // determinant
  double sigma_re{0.5};
  double sigma_im{0};

  // bounds
  std::string check{"all"};
  double delta{0.5};
  double alpha{0.1};
  double beta{3};
  double epsilon{0.1};

  // sturm
  Potential potential{Potential::cos2x};
  std::vector<std::size_t> grids{2048, 4096};
  std::size_t n_max{40};
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x))
    throw InvalidArgument(key + ": expected a finite number, got '" + v + "'");
  return x;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidArgument(key + ": expected a non-negative integer, got '" + v + "'");
  errno = 0;
  const auto x = std::strtoull(v.c_str(), nullptr, 10);
  if (errno == ERANGE) throw InvalidArgument(key + ": integer out of range");
  return x;
}

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// Settings understood by apply_setting, in the order they are reported.
inline const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys{
      "lambda2", "mu",      "lambda", "m",     "dim_factor", "dim_offset", "dim_floor",
      "quad_nodes", "j_max", "format", "output", "seed",     "sigma_re",   "sigma_im",
      "check",   "delta",   "alpha",  "beta",  "epsilon",    "potential",  "grids",
      "n_max"};
  return keys;
}

/// "a..b" or a single integer.
inline std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& v) {
  const auto dots = v.find("..");
  if (dots == std::string::npos) {
    const auto m = detail::parse_uint("m", v);
    return {m, m};
  }
  const auto lo = detail::parse_uint("m", v.substr(0, dots));
  const auto hi = detail::parse_uint("m", v.substr(dots + 2));
  if (hi < lo) throw InvalidArgument("m: empty range '" + v + "'");
  return {lo, hi};
}

inline void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = detail::trim(raw);
  if (key == "lambda2") c.params.lambda_pp = detail::parse_double(key, v);
  else if (key == "mu") c.params.mu = detail::parse_double(key, v);
  else if (key == "lambda") c.params.lambda = detail::parse_double(key, v);
  else if (key == "m") std::tie(c.m_lo, c.m_hi) = parse_range(v);
  else if (key == "dim_factor") c.dim_policy.factor = detail::parse_uint(key, v);
  else if (key == "dim_offset") c.dim_policy.offset = detail::parse_uint(key, v);
  else if (key == "dim_floor") c.dim_policy.floor = detail::parse_uint(key, v);
  else if (key == "quad_nodes") c.quad_nodes = detail::parse_uint(key, v);
  else if (key == "j_max") {
    const auto j = detail::parse_uint(key, v);
    if (j < 1 || j > 6) throw InvalidArgument("j_max must lie in [1, 6]");
    c.j_max = static_cast<int>(j);
  } else if (key == "format") {
    if (v == "csv") c.format = OutputFormat::csv;
    else if (v == "json") c.format = OutputFormat::json;
    else throw InvalidArgument("format: expected csv or json, got '" + v + "'");
  } else if (key == "output") c.output_path = v;
  else if (key == "seed") c.seed = detail::parse_uint(key, v);
  else if (key == "sigma_re") c.sigma_re = detail::parse_double(key, v);
  else if (key == "sigma_im") c.sigma_im = detail::parse_double(key, v);
  else if (key == "check") c.check = v;
  else if (key == "delta") c.delta = detail::parse_double(key, v);
  else if (key == "alpha") c.alpha = detail::parse_double(key, v);
  else if (key == "beta") c.beta = detail::parse_double(key, v);
  else if (key == "epsilon") c.epsilon = detail::parse_double(key, v);
  else if (key == "potential") c.potential = parse_potential(v);
  else if (key == "grids") {
    std::vector<std::size_t> g;
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');)
      g.push_back(detail::parse_uint(key, detail::trim(item)));
    if (g.empty()) throw InvalidArgument("grids: empty list");
    c.grids = std::move(g);
  } else if (key == "n_max") c.n_max = detail::parse_uint(key, v);
  else throw InvalidArgument("unknown setting '" + key + "'");
}

/// key = value lines; blank lines and '#' comments are ignored.
inline std::map<std::string, std::string> parse_config_text(std::string_view text,
                                                            const std::string& origin) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::stringstream ss{std::string(text)};
  for (std::string line; std::getline(ss, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(origin + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(t.substr(0, eq));
    if (key.empty())
      throw InvalidArgument(origin + ":" + std::to_string(line_no) + ": missing key");
    out[key] = detail::trim(t.substr(eq + 1));
  }
  return out;
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

/// Defaults, then file settings, then flag settings.
inline RunConfig resolve_config(const std::string& command,
                                const std::map<std::string, std::string>& file_settings,
                                const std::map<std::string, std::string>& flag_settings) {
  RunConfig c;
  c.command = command;
  for (const auto& [k, v] : file_settings) apply_setting(c, k, v);
  for (const auto& [k, v] : flag_settings) apply_setting(c, k, v);
  return c;
}

/// Every resolved setting as key/value text, in setting_keys() order.
inline std::vector<std::pair<std::string, std::string>> describe_config(const RunConfig& c) {
  using detail::format_double;
  std::string grids;
  for (std::size_t i = 0; i < c.grids.size(); ++i)
    grids += (i ? "," : "") + std::to_string(c.grids[i]);
  return {
      {"command", c.command},
      {"lambda2", format_double(c.params.lambda_pp)},
      {"mu", format_double(c.params.mu)},
      {"lambda", format_double(c.params.lambda)},
      {"m", std::to_string(c.m_lo) + ".." + std::to_string(c.m_hi)},
      {"dim_factor", std::to_string(c.dim_policy.factor)},
      {"dim_offset", std::to_string(c.dim_policy.offset)},
      {"dim_floor", std::to_string(c.dim_policy.floor)},
      {"quad_nodes", std::to_string(c.quad_nodes)},
      {"j_max", std::to_string(c.j_max)},
      {"format", c.format == OutputFormat::csv ? "csv" : "json"},
      {"output", c.output_path},
      {"seed", std::to_string(c.seed)},
      {"sigma_re", format_double(c.sigma_re)},
      {"sigma_im", format_double(c.sigma_im)},
      {"check", c.check},
      {"delta", format_double(c.delta)},
      {"alpha", format_double(c.alpha)},
      {"beta", format_double(c.beta)},
      {"epsilon", format_double(c.epsilon)},
      {"potential", std::string(to_string(c.potential))},
      {"grids", grids},
      {"n_max", std::to_string(c.n_max)},
  };
}

}  // namespace gribov::cli
