#pragma once

#include <stdexcept>
#include <string>

namespace pindist {

/// Failure categories surfaced by the library. Each maps to one documented
/// precondition or runtime guard; the CLI turns them into exit messages.
enum class errc {
  not_prime,
  even_characteristic,
  size_cap_exceeded,
  division_by_zero,
  dimension_mismatch,
  residual_too_large,
  backend_unsupported,
  integer_overflow,
  spec_parse,
  size_exceeds_space,
  file_format,
  invalid_param,
  hypothesis_not_met,
  empty_set,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_prime: return "NotPrime";
    case errc::even_characteristic: return "EvenCharacteristic";
    case errc::size_cap_exceeded: return "SizeCapExceeded";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::residual_too_large: return "ResidualTooLarge";
    case errc::backend_unsupported: return "BackendUnsupported";
    case errc::integer_overflow: return "IntegerOverflow";
    case errc::spec_parse: return "SpecParseError";
    case errc::size_exceeds_space: return "SizeExceedsSpace";
    case errc::file_format: return "FileFormatError";
    case errc::invalid_param: return "InvalidParam";
    case errc::hypothesis_not_met: return "HypothesisNotMet";
    case errc::empty_set: return "EmptySet";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace pindist
