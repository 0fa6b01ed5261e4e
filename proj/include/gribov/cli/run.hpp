#pragma once

// Command dispatch for gribov_lab. run() computes a Report for a resolved
// RunConfig; main_entry() adds flag parsing, config files and the exit-code
// contract (0 ok, 2 bad input, 3 numerical failure).

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "gribov/bargmann.hpp"
#include "gribov/bounds.hpp"
#include "gribov/cli/config.hpp"
#include "gribov/cli/report.hpp"
#include "gribov/errors.hpp"
#include "gribov/linalg.hpp"
#include "gribov/sturm.hpp"
#include "gribov/trace_formula.hpp"

namespace gribov::cli {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "trace",  "corrections", "bounds",
                                              "determinant", "sturm", "describe"};
  return names;
}

inline const std::vector<std::string>& bound_checks() {
  static const std::vector<std::string> checks{
      "interpolation", "gap",            "separation",    "resolvent_sum", "trace_norm",
      "subordination", "relative_bound", "nuclear_decay", "carleman",      "count_rule"};
  return checks;
}

/// Columns each command emits. Trace columns depend on j_max.
inline std::vector<Column> command_columns(const std::string& command, int j_max) {
  if (command == "spectrum")
    return {{"k", "eigenvalue index, ascending real part"},
            {"g_eigenvalue", "l'' lambda_k with lambda_k = k(k-1)(k-2)"},
            {"sigma_re", "Re sigma_k of the truncated operator"},
            {"sigma_im", "Im sigma_k"},
            {"shift_re", "Re (sigma_k - l'' lambda_k)"},
            {"shift_im", "Im (sigma_k - l'' lambda_k)"},
            {"N", "truncation dimension"}};
  if (command == "trace") {
    std::vector<Column> c{{"m", "circle index; gamma_m separates lambda_m and lambda_{m+1}"},
                          {"partial_sum_re", "Re sum_{k<=m} (sigma_k - l'' lambda_k)"},
                          {"partial_sum_im", "Im of the partial sum"}};
    for (int j = 1; j <= j_max; ++j) {
      const auto s = std::to_string(j);
      c.push_back({"corr_" + s + "_re", "Re of correction integral j = " + s});
      c.push_back({"corr_" + s + "_im", "Im of correction integral j = " + s});
    }
    c.push_back({"residual_re", "Re (partial sum + corrections); tends to 0"});
    c.push_back({"residual_im", "Im of the residual"});
    c.push_back({"quad_err", "largest node-doubling estimate over the corrections"});
    c.push_back({"N", "truncation dimension"});
    return c;
  }
  if (command == "corrections")
    return {{"m", "circle index"},
            {"j", "correction order"},
            {"value_re", "Re (1/2 pi i) oint ((-1)^{j-1}/j) Tr[(H_{mu,lambda} R0)^j] ds"},
            {"value_im", "Im of the correction integral"},
            {"quad_err", "|value(M) - value(M/2)|"},
            {"radius", "circle radius r_m = l''(lambda_m + lambda_{m+1})/2"},
            {"N", "truncation dimension"}};
  if (command == "bounds")
    return {{"check", "name of the bound"},
            {"passed", "whether the check met its criterion"},
            {"max_ratio", "worst observed ratio (smallest ratio for lower bounds)"},
            {"arg_max", "where the worst ratio occurred"},
            {"sample_count", "number of evaluations"},
            {"fitted_slope", "log-log slope where a fit is made, else nan"},
            {"tail_bound", "analytic tail bound where one applies, else nan"},
            {"seed", "RNG seed for randomized checks, else -1"}};
  if (command == "determinant")
    return {{"m", "index of the dimension policy step"},
            {"N", "truncation dimension"},
            {"det_re", "Re det(I + H_{mu,lambda} (l''G - sigma)^{-1})"},
            {"det_im", "Im of the determinant"}};
  if (command == "sturm")
    return {{"n", "mode index, n >= 0"},
            {"partial_sum", "extrapolated sum_{k<=n} (sigma_k - k^2)"}};
  if (command == "describe")
    return {{"command", "command name"},
            {"column", "column name"},
            {"description", "meaning of the column"}};
  throw InvalidArgument("unknown command '" + command + "'");
}

inline std::string command_summary(const std::string& command) {
  static const std::map<std::string, std::string> s{
      {"spectrum", "eigenvalues sigma_1..sigma_m of the truncated operator"},
      {"trace", "partial sums, correction integrals and residual per m"},
      {"corrections", "correction integrals j = 1..j_max per m"},
      {"bounds", "norm and resolvent bounds, scans and fits"},
      {"determinant", "perturbation determinant at sigma per truncation"},
      {"sturm", "Neumann Sturm-Liouville trace sum with extrapolation"},
      {"describe", "documentation of every output column"}};
  return s.at(command);
}

namespace detail {

inline TruncationSpec truncation_for(const RunConfig& c, std::uint64_t m) {
  return {c.dim_policy.dim(static_cast<std::size_t>(m)), 1};
}

inline nlohmann::ordered_json complex_json(const Complex<TraceReal>& z) {
  return nlohmann::ordered_json::array(
      {static_cast<double>(z.real()), static_cast<double>(z.imag())});
}

inline double or_nan(const std::optional<double>& x) {
  return x ? *x : std::numeric_limits<double>::quiet_NaN();
}

inline Report run_spectrum(const RunConfig& c) {
  Report r;
  r.columns = command_columns("spectrum", c.j_max);
  const auto p = c.params.cast<TraceReal>();
  const auto trunc = truncation_for(c, c.m_hi);
  const auto pt = partial_trace_sum(p, c.m_hi, trunc);
  for (std::size_t k = 0; k < pt.sigma.size(); ++k) {
    const auto idx = static_cast<std::uint64_t>(k + 1);
    r.add_row({static_cast<std::int64_t>(idx),
               c.params.lambda_pp * static_cast<double>(eigenvalue_G(idx)),
               static_cast<double>(pt.sigma[k].real()), static_cast<double>(pt.sigma[k].imag()),
               static_cast<double>(pt.shifts[k].real()),
               static_cast<double>(pt.shifts[k].imag()),
               static_cast<std::int64_t>(trunc.dim)});
  }
  r.diagnostics["count_h"] = pt.count_h;
  r.diagnostics["count_g"] = pt.count_g;
  r.diagnostics["shift_sum"] = complex_json(pt.sum);
  return r;
}

inline Report run_trace(const RunConfig& c) {
  Report r;
  r.columns = command_columns("trace", c.j_max);
  const auto p = c.params.cast<TraceReal>();
  auto counts = nlohmann::ordered_json::array();
  for (std::uint64_t m = c.m_lo; m <= c.m_hi; ++m) {
    const auto trunc = truncation_for(c, m);
    const auto contour = midpoint_contour(p, m, c.quad_nodes);
    const auto rep = regularized_residual(p, m, c.j_max, trunc, contour);
    std::vector<Cell> row{static_cast<std::int64_t>(m),
                          static_cast<double>(rep.partial_sum.real()),
                          static_cast<double>(rep.partial_sum.imag())};
    for (const auto& t : rep.corrections) {
      row.emplace_back(static_cast<double>(t.value.real()));
      row.emplace_back(static_cast<double>(t.value.imag()));
    }
    row.emplace_back(static_cast<double>(rep.residual.real()));
    row.emplace_back(static_cast<double>(rep.residual.imag()));
    row.emplace_back(static_cast<double>(rep.max_quad_error()));
    row.emplace_back(static_cast<std::int64_t>(rep.truncation_dim));
    r.add_row(std::move(row));
    counts.push_back({{"m", m}, {"count_h", rep.count_h}, {"count_g", rep.count_g}});
  }
  r.diagnostics["counts"] = std::move(counts);
  r.diagnostics["precision"] = "long double";
  return r;
}

inline Report run_corrections(const RunConfig& c) {
  Report r;
  r.columns = command_columns("corrections", c.j_max);
  const auto p = c.params.cast<TraceReal>();
  for (std::uint64_t m = c.m_lo; m <= c.m_hi; ++m) {
    const auto trunc = truncation_for(c, m);
    const auto contour = midpoint_contour(p, m, c.quad_nodes);
    const auto terms = correction_integrals(p, contour, trunc, c.j_max, TraceOptions<>{}.quad_tol);
    for (const auto& t : terms)
      r.add_row({static_cast<std::int64_t>(m), static_cast<std::int64_t>(t.order_j),
                 static_cast<double>(t.value.real()), static_cast<double>(t.value.imag()),
                 static_cast<double>(t.quad_error_estimate), static_cast<double>(contour.radius),
                 static_cast<std::int64_t>(trunc.dim)});
  }
  r.diagnostics["precision"] = "long double";
  return r;
}

inline BoundReport count_rule_report(const RunConfig& c) {
  BoundReport rep;
  rep.name = "correction_count_rule";
  const auto l = correction_count_rule(c.delta, c.alpha);
  const int limit = correction_count_limit(c.delta);
  rep.max_ratio = l ? *l : std::numeric_limits<double>::infinity();
  rep.arg_max = "delta=" + detail::format_double(c.delta) + " alpha=" + detail::format_double(c.alpha);
  rep.sample_count = 1;
  rep.constants["l"] = rep.max_ratio;
  rep.constants["limit_alpha_to_2/3-delta"] = limit;
  rep.passed = true;
  return rep;
}

inline BoundReport run_bound(const RunConfig& c, const std::string& check) {
  const BoundParams bp{c.delta, c.alpha, c.beta, c.epsilon};
  if (check == "interpolation") return check_interpolation_inequality(100000, c.seed);
  if (check == "gap") return gap_bound_scan(10000);
  if (check == "separation") return separation_scan(500, c.epsilon);
  if (check == "resolvent_sum") return resolvent_sum_sweep(3, 200, 1000000);
  if (check == "trace_norm") return trace_norm_sweep(3, 200, c.params.lambda_pp);
  if (check == "subordination") return subordination_constant(c.params, 10000, 50, c.seed + 1);
  if (check == "relative_bound") {
    bp.require_beta();
    return relative_bound_check(c.params, c.beta, {0.01, 0.1, 1.0}, 2000, 50, c.seed + 2);
  }
  if (check == "nuclear_decay") {
    std::vector<std::uint64_t> ms;
    for (std::uint64_t m = 10; m <= 100; ++m) ms.push_back(m);
    return nuclear_decay_fit(c.params, c.delta, c.alpha, ms, TruncationSpec{400, 1});
  }
  if (check == "carleman") {
    bp.require_alpha();
    return carleman_diagnostic(1 - c.delta - c.alpha, std::uint64_t{1} << 20);
  }
  if (check == "count_rule") return count_rule_report(c);
  throw InvalidArgument("unknown bounds check '" + check + "'");
}

inline Report run_bounds(const RunConfig& c) {
  Report r;
  r.columns = command_columns("bounds", c.j_max);
  std::vector<std::string> checks;
  if (c.check == "all")
    checks = bound_checks();
  else
    checks.push_back(c.check);
  auto constants = nlohmann::ordered_json::object();
  for (const auto& name : checks) {
    const auto rep = run_bound(c, name);
    r.add_row({name, rep.passed, rep.max_ratio, rep.arg_max,
               static_cast<std::int64_t>(rep.sample_count), or_nan(rep.fitted_slope),
               or_nan(rep.tail_bound),
               rep.seed ? static_cast<std::int64_t>(*rep.seed) : std::int64_t{-1}});
    auto entry = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rep.constants) entry[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr;
    if (!rep.sequence_points.empty()) {
      auto pts = nlohmann::ordered_json::array();
      for (const auto& [x, y] : rep.sequence_points) pts.push_back({x, y});
      entry["sequence_points"] = std::move(pts);
    }
    constants[name] = std::move(entry);
  }
  r.diagnostics["checks"] = std::move(constants);
  return r;
}

inline Report run_determinant(const RunConfig& c) {
  Report r;
  r.columns = command_columns("determinant", c.j_max);
  const Complex<double> sigma(c.sigma_re, c.sigma_im);
  for (std::uint64_t m = c.m_lo; m <= c.m_hi; ++m) {
    const auto trunc = truncation_for(c, m);
    const auto d = perturbation_determinant(c.params, sigma, trunc);
    r.add_row({static_cast<std::int64_t>(m), static_cast<std::int64_t>(trunc.dim), d.real(),
               d.imag()});
  }
  return r;
}

inline Report run_sturm(const RunConfig& c) {
  Report r;
  r.columns = command_columns("sturm", c.j_max);
  const auto rep = gelfand_levitan_residual(c.potential, c.grids, c.n_max);
  for (std::size_t n = 0; n < rep.partial_sums.size(); ++n)
    r.add_row({static_cast<std::int64_t>(n), rep.partial_sums[n]});
  r.diagnostics["potential"] = std::string(to_string(rep.potential));
  r.diagnostics["target"] = rep.target;
  r.diagnostics["extrapolated_sum"] = rep.extrapolated_sum;
  r.diagnostics["residual"] = rep.residual;
  r.diagnostics["grids"] = rep.grids;
  r.diagnostics["grid_sums"] = rep.grid_sums;
  r.diagnostics["max_late_increment"] = rep.max_late_increment;
  r.diagnostics["index_convention"] = rep.index_convention;
  return r;
}

inline Report run_describe(const RunConfig& c) {
  Report r;
  r.columns = command_columns("describe", c.j_max);
  for (const auto& cmd : command_names())
    for (const auto& col : command_columns(cmd, c.j_max)) r.add_row({cmd, col.name, col.description});
  return r;
}

}  // namespace detail

/// Validates the cross-field parts of a config that apply_setting cannot see.
inline void validate(const RunConfig& c) {
  bool known = false;
  for (const auto& n : command_names()) known = known || n == c.command;
  if (!known) throw InvalidArgument("unknown command '" + c.command + "'");
  c.params.validate();
  if (c.command == "trace" || c.command == "corrections" || c.command == "spectrum") {
    if (c.m_lo < 3) throw InvalidArgument("m must be >= 3");
    if (c.dim_policy.factor < 4) throw InvalidArgument("dim_factor must be >= 4");
  }
  if (c.command == "determinant" && c.m_lo < 1) throw InvalidArgument("m must be >= 1");
  if (c.command == "bounds" && c.check != "all") {
    bool ok = false;
    for (const auto& n : bound_checks()) ok = ok || n == c.check;
    if (!ok) throw InvalidArgument("unknown bounds check '" + c.check + "'");
  }
}

inline Report run(const RunConfig& c) {
  validate(c);
  if (c.command == "spectrum") return detail::run_spectrum(c);
  if (c.command == "trace") return detail::run_trace(c);
  if (c.command == "corrections") return detail::run_corrections(c);
  if (c.command == "bounds") return detail::run_bounds(c);
  if (c.command == "determinant") return detail::run_determinant(c);
  if (c.command == "sturm") return detail::run_sturm(c);
  return detail::run_describe(c);
}

inline int exit_code_for(ErrorKind kind) { return is_numerical_failure(kind) ? 3 : 2; }

inline void write_error(std::ostream& err, std::string_view kind, const std::string& message,
                        int code) {
  nlohmann::ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  j["exit_code"] = code;
  err << j.dump() << '\n';
}

namespace detail {

inline std::string flag_name(const std::string& key) {
  std::string f = "--" + key;
  for (auto& ch : f)
    if (ch == '_') ch = '-';
  return f;
}

inline const std::map<std::string, std::string>& setting_help() {
  static const std::map<std::string, std::string> help{
      {"lambda2", "magic coupling l'' (> 0 for trace work)"},
      {"mu", "Pomeron intercept"},
      {"lambda", "triple coupling"},
      {"m", "circle index or range a..b"},
      {"dim_factor", "N(m) = max(factor*m + offset, m + floor)"},
      {"dim_offset", "offset in N(m)"},
      {"dim_floor", "floor in N(m)"},
      {"quad_nodes", "contour nodes, power of two >= 16"},
      {"j_max", "number of correction terms, 1..6"},
      {"format", "csv or json"},
      {"output", "output file (default standard output)"},
      {"seed", "base RNG seed for randomized checks"},
      {"sigma_re", "Re sigma for determinant"},
      {"sigma_im", "Im sigma for determinant"},
      {"check", "bounds check name or 'all'"},
      {"delta", "growth exponent delta in [1/2, 2/3)"},
      {"alpha", "decay exponent alpha in [0, 2/3 - delta)"},
      {"beta", "relative-bound exponent in [3, 4)"},
      {"epsilon", "epsilon for separation scans"},
      {"potential", "zero, cos2x or linear_centered"},
      {"grids", "comma-separated grid sizes"},
      {"n_max", "highest Sturm mode summed"},
  };
  return help;
}

}  // namespace detail

/// Parses argv, resolves the config and writes the report. `env_config` is
/// the value of GRIBOV_LAB_CONFIG, if set.
inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                      std::optional<std::string> env_config) {
  CLI::App app{"Numerical laboratory for the regularized trace of the Gribov operator",
               "gribov_lab"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");

  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, CLI::Option*>> opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : command_names()) {
    auto* sub = app.add_subcommand(cmd, command_summary(cmd));
    sub->fallthrough();
    subs[cmd] = sub;
    for (const auto& key : setting_keys()) {
      opts[cmd][key] = sub->add_option(detail::flag_name(key), raw[cmd][key],
                                       detail::setting_help().at(key));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, "InvalidArgument", e.what(), 2);
    return 2;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  try {
    std::map<std::string, std::string> file_settings;
    if (!config_path.empty())
      file_settings = read_config_file(config_path);
    else if (env_config && !env_config->empty())
      file_settings = read_config_file(*env_config);
    std::map<std::string, std::string> flag_settings;
    for (const auto& [key, opt] : opts[command])
      if (opt->count() > 0) flag_settings[key] = raw[command][key];

    const RunConfig cfg = resolve_config(command, file_settings, flag_settings);
    const Report report = run(cfg);
    if (cfg.output_path.empty()) {
      write_report(out, cfg, report);
    } else {
      std::ofstream f(cfg.output_path, std::ios::binary);
      if (!f) throw InvalidArgument("cannot open output file '" + cfg.output_path + "'");
      write_report(f, cfg, report);
      if (!f) throw InvalidArgument("write failed for '" + cfg.output_path + "'");
    }
    return 0;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    write_error(err, to_string(e.kind()), e.what(), code);
    return code;
  }
}

}  // namespace gribov::cli
