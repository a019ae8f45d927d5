#pragma once

/**
 * @file cli.hpp
 * @brief Command dispatch for the periodlab tool.
 *
 * Exit codes: 0 success, 1 input error, 2 valid input that is not a center,
 * 64 usage error.
 */

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "periodlab/builtins.hpp"
#include "periodlab/conservative.hpp"
#include "periodlab/criteria.hpp"
#include "periodlab/error.hpp"
#include "periodlab/lienard.hpp"
#include "periodlab/report.hpp"
#include "periodlab/system.hpp"

namespace periodlab::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 1;
inline constexpr int exit_not_a_center = 2;
inline constexpr int exit_usage = 64;

inline constexpr const char* tolerance_variable = "PERIODLAB_TOL";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses a positive finite decimal literal.
inline double parse_tolerance(std::string_view text, std::string_view origin) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v) || v <= 0.0) {
    throw UsageError(std::string(origin) + ": expected a positive decimal tolerance, got '" + std::string(text) + "'");
  }
  return v;
}

/// Integrator tolerance: flag, then environment, then default.
inline double resolve_tolerance(const std::optional<double>& flag) {
  if (flag) {
    if (!(*flag > 0.0) || !std::isfinite(*flag)) throw UsageError("--tol must be positive");
    return *flag;
  }
  if (const char* env = std::getenv(tolerance_variable); env != nullptr && *env != '\0') {
    return parse_tolerance(env, tolerance_variable);
  }
  return default_integrator_tolerance;
}

struct ReportArgs {
  std::string g;
  std::string f = "0";
  double cmax = ClassifyOptions{}.domain_cap;
  int samples = ClassifyOptions{}.samples;
  std::optional<double> tol;
  std::string format = "json";
};

struct CurveArgs {
  std::string g;
  std::string f = "0";
  double clo = 0.0;
  double chi = 0.0;
  int n = 8;
  std::optional<double> tol;
  double cmax = default_well_cap;
  std::string out;
  bool force = false;
};

inline void add_report_options(CLI::App& cmd, ReportArgs& a, bool with_system) {
  if (with_system) {
    cmd.add_option("--g", a.g, "restoring force g(x)")->required();
    cmd.add_option("--f", a.f, "damping coefficient f(x)")->capture_default_str();
  }
  cmd.add_option("--cmax", a.cmax, "half-width of the explored domain")->capture_default_str();
  cmd.add_option("--samples", a.samples, "numeric curve samples")->capture_default_str();
  cmd.add_option("--tol", a.tol, "integrator tolerance");
  cmd.add_option("--format", a.format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
}

inline void check_report_args(const ReportArgs& a) {
  if (!(a.cmax > 0.0) || !std::isfinite(a.cmax)) throw UsageError("--cmax must be positive");
  if (a.samples < 3) throw UsageError("--samples must be at least 3");
}

inline int emit_report(const SystemSpec& sys, const ReportArgs& a, const std::optional<BuiltinInfo>& builtin,
                       std::ostream& out) {
  check_report_args(a);
  ClassifyOptions opt;
  opt.domain_cap = a.cmax;
  opt.samples = a.samples;
  opt.tol = resolve_tolerance(a.tol);
  const ClassificationReport rep = classify(sys, opt);
  ReportDocument doc = make_report_document(rep);
  doc.builtin = builtin;
  if (a.format == "text") {
    write_report_text(doc, out);
  } else {
    out << dump_report(doc);
  }
  return rep.conclusion == Conclusion::not_a_center ? exit_not_a_center : exit_ok;
}

inline int cmd_report(const ReportArgs& a, std::ostream& out) {
  return emit_report(validate_system(a.f, a.g), a, std::nullopt, out);
}

inline int cmd_curve(const CurveArgs& a, std::ostream& out) {
  if (!(a.clo > 0.0) || !(a.chi > 0.0) || !std::isfinite(a.chi)) throw UsageError("--clo and --chi must be positive");
  if (a.clo >= a.chi) throw UsageError("empty range: --clo must be below --chi");
  if (a.n < 2) throw UsageError("--n must be at least 2");
  if (!(a.cmax > 0.0) || !std::isfinite(a.cmax)) throw UsageError("--cmax must be positive");
  const double tol = resolve_tolerance(a.tol);
  const SystemSpec sys = validate_system(a.f, a.g);

  PeriodCurve curve;
  if (sys.is_conservative()) {
    curve = period_curve_conservative(Well(sys.g(), a.cmax), a.clo, a.chi, a.n, tol);
  } else {
    LienardCurveOptions opt;
    opt.tol = tol;
    opt.domain_cap = a.cmax;
    opt.check_center_condition = !a.force;
    curve = period_curve_lienard(sys, a.clo, a.chi, a.n, opt);
  }

  if (a.out.empty()) {
    write_curve_csv(curve, out);
  } else {
    std::ofstream file(a.out, std::ios::binary);
    if (!file) throw Error(Errc::domain_error, "cannot open '" + a.out + "' for writing");
    write_curve_csv(curve, file);
    if (!file) throw Error(Errc::domain_error, "failed writing '" + a.out + "'");
  }
  return exit_ok;
}

inline int cmd_builtin(const std::optional<std::string>& key, const ReportArgs& a, std::ostream& out) {
  if (!key) {
    for (const auto& e : builtin_registry()) {
      out << e.key << "\tf=" << e.f << "\tg=" << e.g << "\texpected=" << to_string(e.expected) << "\t"
          << e.provenance << "\n";
    }
    return exit_ok;
  }
  const BuiltinEntry& e = find_builtin(*key);
  const BuiltinInfo info{std::string(e.key), std::string(e.f), std::string(e.g), std::string(to_string(e.expected)),
                         std::string(e.provenance)};
  return emit_report(builtin_system(e), a, info, out);
}

/// Runs the tool on args (program name excluded) and returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Period function analysis for planar centers", "periodlab"};
  app.require_subcommand(1);

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand("report", "classify a system and print a report");
  add_report_options(*report, report_args, true);

  CurveArgs curve_args;
  CLI::App* curve = app.add_subcommand("curve", "sample the period curve as CSV");
  curve->add_option("--g", curve_args.g, "restoring force g(x)")->required();
  curve->add_option("--f", curve_args.f, "damping coefficient f(x)")->capture_default_str();
  curve->add_option("--clo", curve_args.clo, "lowest energy or amplitude")->required();
  curve->add_option("--chi", curve_args.chi, "highest energy or amplitude")->required();
  curve->add_option("--n", curve_args.n, "number of samples")->capture_default_str();
  curve->add_option("--tol", curve_args.tol, "integrator tolerance");
  curve->add_option("--cmax", curve_args.cmax, "half-width of the well search")->capture_default_str();
  curve->add_option("--out", curve_args.out, "output path, default standard output");
  curve->add_flag("--force", curve_args.force, "skip the center condition check");

  std::optional<std::string> builtin_key;
  ReportArgs builtin_args;
  CLI::App* builtin = app.add_subcommand("builtin", "list builtin systems or report on one");
  builtin->add_option("key", builtin_key, "registry key");
  add_report_options(*builtin, builtin_args, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  try {
    if (*report) return cmd_report(report_args, out);
    if (*curve) return cmd_curve(curve_args, out);
    return cmd_builtin(builtin_key, builtin_args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::not_a_center ? exit_not_a_center : exit_input_error;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace periodlab::cli
