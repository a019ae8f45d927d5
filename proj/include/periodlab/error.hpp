#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace periodlab {

enum class Errc {
  illegal_character,
  malformed_number,
  unexpected_token,
  unknown_identifier,
  unbalanced_parentheses,
  not_at_origin,
  nonpositive_stiffness,
  domain_error,
  not_polynomial,
  degenerate_well,
  energy_out_of_range,
  amplitude_out_of_range,
  quadrature_no_convergence,
  step_underflow,
  no_return,
  not_a_center,
  too_few_samples,
  undefined_witness,
  no_real_target,
  inapplicable,
  unknown_key,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::illegal_character: return "IllegalCharacter";
    case Errc::malformed_number: return "MalformedNumber";
    case Errc::unexpected_token: return "UnexpectedToken";
    case Errc::unknown_identifier: return "UnknownIdentifier";
    case Errc::unbalanced_parentheses: return "UnbalancedParentheses";
    case Errc::not_at_origin: return "NotAtOrigin";
    case Errc::nonpositive_stiffness: return "NonpositiveStiffness";
    case Errc::domain_error: return "DomainError";
    case Errc::not_polynomial: return "NotPolynomial";
    case Errc::degenerate_well: return "DegenerateWell";
    case Errc::energy_out_of_range: return "EnergyOutOfRange";
    case Errc::amplitude_out_of_range: return "AmplitudeOutOfRange";
    case Errc::quadrature_no_convergence: return "QuadratureNoConvergence";
    case Errc::step_underflow: return "StepUnderflow";
    case Errc::no_return: return "NoReturn";
    case Errc::not_a_center: return "NotACenter";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::undefined_witness: return "UndefinedWitness";
    case Errc::no_real_target: return "NoRealTarget";
    case Errc::inapplicable: return "Inapplicable";
    case Errc::unknown_key: return "UnknownKey";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. The message is
/// prefixed with the error name so command-line users see it verbatim.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Lexer/parser failure carrying the character offset into the source text.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t offset, const std::string& detail)
      : Error(code, detail + " at offset " + std::to_string(offset)), offset_(offset) {}

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Raised when a sampled orbit fails to close within the closed-orbit guard.
class NotACenterError : public Error {
 public:
  NotACenterError(double amplitude, double displacement, const std::string& detail)
      : Error(Errc::not_a_center, detail), amplitude_(amplitude), displacement_(displacement) {}

  [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
  [[nodiscard]] double displacement() const noexcept { return displacement_; }

 private:
  double amplitude_;
  double displacement_;
};

}  // namespace periodlab
