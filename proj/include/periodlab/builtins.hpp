#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "periodlab/criteria.hpp"
#include "periodlab/error.hpp"
#include "periodlab/lienard.hpp"
#include "periodlab/system.hpp"

namespace periodlab {

/// Named example system with the conclusion classify is expected to reach.
struct BuiltinEntry {
  std::string_view key;
  std::string_view f;
  std::string_view g;
  Conclusion expected;
  std::string_view provenance;
  std::string_view rayleigh_F = {};  // set when f comes from a Rayleigh reduction
};

inline std::span<const BuiltinEntry> builtin_registry() {
  static const std::vector<BuiltinEntry> entries{
      {"harmonic", "0", "x", Conclusion::isochronous_candidate, "linear oscillator, every orbit has period 2*pi"},
      {"pendulum", "0", "sin(x)", Conclusion::increasing, "mathematical pendulum, period grows with amplitude"},
      {"softening", "0", "x - x^3", Conclusion::increasing, "softening cubic spring"},
      {"hardening", "0", "x + x^3", Conclusion::decreasing, "hardening cubic spring"},
      {"sabatini_isochrone", "x", "x + x^3/9", Conclusion::isochronous_candidate,
       "Sabatini isochrone: g(x) = g'(0)x + M(x)^2/x^3 with M = int_0^x s f(s) ds"},
      {"damped_linear", "x", "x", Conclusion::increasing, "linear restoring force with odd damping f = x"},
      {"noncenter", "x^2", "x + x^2", Conclusion::not_a_center, "even damping with quadratic force, orbits spiral"},
      {"rayleigh_example", "2*x", "x", Conclusion::increasing, "Rayleigh equation x'' + F(x') + x = 0 with F = x^2",
       "x^2"},
  };
  return entries;
}

inline const BuiltinEntry& find_builtin(std::string_view key) {
  const auto all = builtin_registry();
  const auto it = std::find_if(all.begin(), all.end(), [&](const BuiltinEntry& e) { return e.key == key; });
  if (it == all.end()) throw Error(Errc::unknown_key, "no builtin named '" + std::string(key) + "'");
  return *it;
}

/// The entry's system; Rayleigh entries are rebuilt from F.
inline SystemSpec builtin_system(const BuiltinEntry& e) {
  if (!e.rayleigh_F.empty()) return rayleigh_to_lienard(parse(e.rayleigh_F)).system;
  return validate_system(e.f, e.g);
}

}  // namespace periodlab
