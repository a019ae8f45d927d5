#pragma once

/**
 * @file report.hpp
 * @brief JSON report document and CSV period-curve output.
 *
 * Numbers are written with 17 significant digits so a parse of the output
 * reproduces every double bit for bit. Non-finite numbers become null.
 */

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "periodlab/conservative.hpp"
#include "periodlab/criteria.hpp"

namespace periodlab {

using ordered_json = nlohmann::ordered_json;

struct ReportWitness {
  std::optional<double> x;  // empty means "at0"
  std::string label;
  double value = 0.0;
  friend bool operator==(const ReportWitness&, const ReportWitness&) = default;
};

struct ReportVerdict {
  std::string name;
  std::vector<ReportWitness> witnesses;
  bool applicable = true;
  std::string reason;
  std::string conclusion;
  bool defect = false;
  friend bool operator==(const ReportVerdict&, const ReportVerdict&) = default;
};

struct ReportSample {
  double c = 0.0;
  double T = 0.0;
  std::optional<double> phi;
  friend bool operator==(const ReportSample&, const ReportSample&) = default;
};

struct BuiltinInfo {
  std::string key;
  std::string f;
  std::string g;
  std::string expected;
  std::string provenance;
  friend bool operator==(const BuiltinInfo&, const BuiltinInfo&) = default;
};

struct ReportDocument {
  std::string schema_version = "1";
  std::string f;
  std::string g;
  bool conservative = false;
  std::map<std::string, double> derivatives_at_0;
  std::vector<ReportVerdict> verdicts;
  double T0 = 0.0, K = 0.0, Q = 0.0;
  double lemma2_value = 0.0, variant_value = 0.0, phi_ccc = 0.0;
  std::string parameterization;
  std::string method;
  double curve_tolerance = 0.0;
  std::string numeric_verdict;
  std::vector<ReportSample> curve;
  std::string conclusion;
  bool agreement = true;
  std::optional<bool> corollary3_decreasing;
  std::optional<BuiltinInfo> builtin;
  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

inline ReportDocument make_report_document(const ClassificationReport& r) {
  ReportDocument d;
  const SystemSpec& s = r.system;
  d.f = s.f().to_string();
  d.g = s.g().to_string();
  d.conservative = s.is_conservative();
  d.derivatives_at_0 = {{"f0", s.f0()},   {"fp0", s.fp0()},   {"fpp0", s.fpp0()},
                        {"gp0", s.gp0()}, {"gpp0", s.gpp0()}, {"gppp0", s.gppp0()}};
  for (const auto& v : r.verdicts) {
    ReportVerdict rv{std::string(to_string(v.name)), {}, v.applicable, v.reason, std::string(to_string(v.conclusion)),
                     v.defect};
    for (const auto& w : v.witnesses) rv.witnesses.push_back({w.x, w.label, w.value});
    d.verdicts.push_back(std::move(rv));
  }
  d.T0 = r.expansion.T0;
  d.K = r.expansion.K;
  d.Q = r.expansion.Q;
  d.lemma2_value = r.center.lemma2_value;
  d.variant_value = r.center.variant_value;
  d.phi_ccc = r.center.phi_ccc;
  d.parameterization = std::string(to_string(r.curve.parameterization));
  d.method = std::string(to_string(r.curve.method));
  d.curve_tolerance = r.curve.tolerance;
  d.numeric_verdict = std::string(to_string(r.numeric_verdict));
  for (const auto& p : r.curve.samples) d.curve.push_back({p.param, p.period, p.displacement});
  d.conclusion = std::string(to_string(r.conclusion));
  d.agreement = r.agreement;
  d.corollary3_decreasing = r.corollary3_decreasing;
  return d;
}

// =============================================================================
// JSON mapping
// =============================================================================

namespace detail {

inline ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

inline double number_from(const ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace detail

inline ordered_json to_json(const ReportDocument& d) {
  ordered_json j;
  j["schema_version"] = d.schema_version;
  ordered_json derivs = ordered_json::object();
  for (const char* key : {"f0", "fp0", "fpp0", "gp0", "gpp0", "gppp0"}) {
    const auto it = d.derivatives_at_0.find(key);
    if (it != d.derivatives_at_0.end()) derivs[key] = detail::number_or_null(it->second);
  }
  j["system"] = {{"f", d.f}, {"g", d.g}, {"conservative", d.conservative}, {"derivatives_at_0", derivs}};
  ordered_json verdicts = ordered_json::array();
  for (const auto& v : d.verdicts) {
    ordered_json ws = ordered_json::array();
    for (const auto& w : v.witnesses) {
      ws.push_back({{"x", w.x ? detail::number_or_null(*w.x) : ordered_json("at0")},
                    {"label", w.label},
                    {"value", detail::number_or_null(w.value)}});
    }
    verdicts.push_back({{"name", v.name},
                        {"witnesses", ws},
                        {"applicable", v.applicable},
                        {"reason", v.reason},
                        {"conclusion", v.conclusion},
                        {"defect", v.defect}});
  }
  j["verdicts"] = verdicts;
  j["expansion"] = {{"T0", detail::number_or_null(d.T0)}, {"K", detail::number_or_null(d.K)},
                    {"Q", detail::number_or_null(d.Q)}};
  j["center_condition"] = {{"lemma2_value", detail::number_or_null(d.lemma2_value)},
                           {"variant_value", detail::number_or_null(d.variant_value)},
                           {"phi_ccc", detail::number_or_null(d.phi_ccc)}};
  j["numeric"] = {{"parameterization", d.parameterization},
                  {"method", d.method},
                  {"tolerance", detail::number_or_null(d.curve_tolerance)},
                  {"verdict", d.numeric_verdict}};
  ordered_json curve = ordered_json::array();
  for (const auto& p : d.curve) {
    curve.push_back({{"c", detail::number_or_null(p.c)},
                     {"T", detail::number_or_null(p.T)},
                     {"phi", p.phi ? detail::number_or_null(*p.phi) : ordered_json(nullptr)}});
  }
  j["curve"] = curve;
  j["final"] = {{"conclusion", d.conclusion},
                {"agreement", d.agreement},
                {"corollary3_decreasing",
                 d.corollary3_decreasing ? ordered_json(*d.corollary3_decreasing) : ordered_json(nullptr)}};
  if (d.builtin) {
    j["builtin"] = {{"key", d.builtin->key},
                    {"f", d.builtin->f},
                    {"g", d.builtin->g},
                    {"expected", d.builtin->expected},
                    {"provenance", d.builtin->provenance}};
  }
  return j;
}

inline ReportDocument report_from_json(const ordered_json& j) {
  ReportDocument d;
  d.schema_version = j.at("schema_version").get<std::string>();
  const auto& sys = j.at("system");
  d.f = sys.at("f").get<std::string>();
  d.g = sys.at("g").get<std::string>();
  d.conservative = sys.at("conservative").get<bool>();
  for (const auto& [key, value] : sys.at("derivatives_at_0").items()) d.derivatives_at_0[key] = detail::number_from(value);
  for (const auto& v : j.at("verdicts")) {
    ReportVerdict rv;
    rv.name = v.at("name").get<std::string>();
    for (const auto& w : v.at("witnesses")) {
      ReportWitness rw;
      if (!w.at("x").is_string()) rw.x = detail::number_from(w.at("x"));
      rw.label = w.at("label").get<std::string>();
      rw.value = detail::number_from(w.at("value"));
      rv.witnesses.push_back(std::move(rw));
    }
    rv.applicable = v.at("applicable").get<bool>();
    rv.reason = v.at("reason").get<std::string>();
    rv.conclusion = v.at("conclusion").get<std::string>();
    rv.defect = v.at("defect").get<bool>();
    d.verdicts.push_back(std::move(rv));
  }
  const auto& e = j.at("expansion");
  d.T0 = detail::number_from(e.at("T0"));
  d.K = detail::number_from(e.at("K"));
  d.Q = detail::number_from(e.at("Q"));
  const auto& cc = j.at("center_condition");
  d.lemma2_value = detail::number_from(cc.at("lemma2_value"));
  d.variant_value = detail::number_from(cc.at("variant_value"));
  d.phi_ccc = detail::number_from(cc.at("phi_ccc"));
  const auto& n = j.at("numeric");
  d.parameterization = n.at("parameterization").get<std::string>();
  d.method = n.at("method").get<std::string>();
  d.curve_tolerance = detail::number_from(n.at("tolerance"));
  d.numeric_verdict = n.at("verdict").get<std::string>();
  for (const auto& p : j.at("curve")) {
    ReportSample s{detail::number_from(p.at("c")), detail::number_from(p.at("T")), std::nullopt};
    if (!p.at("phi").is_null()) s.phi = p.at("phi").get<double>();
    d.curve.push_back(s);
  }
  const auto& fin = j.at("final");
  d.conclusion = fin.at("conclusion").get<std::string>();
  d.agreement = fin.at("agreement").get<bool>();
  if (!fin.at("corollary3_decreasing").is_null()) d.corollary3_decreasing = fin.at("corollary3_decreasing").get<bool>();
  if (j.contains("builtin")) {
    const auto& b = j.at("builtin");
    d.builtin = BuiltinInfo{b.at("key").get<std::string>(), b.at("f").get<std::string>(), b.at("g").get<std::string>(),
                            b.at("expected").get<std::string>(), b.at("provenance").get<std::string>()};
  }
  return d;
}

// =============================================================================
// Writers
// =============================================================================

inline std::string format_17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_json(const ordered_json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ordered_json(key).dump() + ": ";
        write_json(value, out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad;
        write_json(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_17(v == 0.0 ? 0.0 : v) : "null";  // -0 does not survive a parse
      return;
    }
    default: out += j.dump(); return;
  }
}

}  // namespace detail

/// Indented JSON with 17-significant-digit numbers, newline terminated.
inline std::string dump_json(const ordered_json& j) {
  std::string out;
  detail::write_json(j, out, 0);
  out += "\n";
  return out;
}

inline std::string dump_report(const ReportDocument& d) { return dump_json(to_json(d)); }

/// CSV with header param,T,phi; phi is empty for quadrature samples.
inline void write_curve_csv(const PeriodCurve& curve, std::ostream& os) {
  os << "param,T,phi\n";
  for (const auto& s : curve.samples) {
    os << format_17(s.param) << ',' << format_17(s.period) << ',';
    if (s.displacement) os << format_17(*s.displacement);
    os << '\n';
  }
}

/// Short human-readable summary.
inline void write_report_text(const ReportDocument& d, std::ostream& os) {
  os << "f = " << d.f << "\ng = " << d.g << (d.conservative ? "  (conservative)" : "") << "\n";
  os << "T0 = " << format_17(d.T0) << "  K = " << format_17(d.K) << "  Q = " << format_17(d.Q) << "\n";
  for (const auto& v : d.verdicts) {
    os << "  " << v.name << ": " << v.conclusion << (v.applicable ? "" : " (not applicable)");
    if (!v.reason.empty()) os << "  [" << v.reason << "]";
    os << "\n";
  }
  os << "numeric curve (" << d.method << ", " << d.parameterization << "): " << d.numeric_verdict << "\n";
  os << "conclusion: " << d.conclusion << "  agreement: " << (d.agreement ? "yes" : "no") << "\n";
}

}  // namespace periodlab
