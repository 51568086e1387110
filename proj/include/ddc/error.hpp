#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddc {

enum class ErrorCode {
  malformed_input,
  containment_violation,
  not_well_defined,
  ring_mismatch,
  bad_indices,
  not_a_complex,
  not_a_chain_map,
  not_torsion,
  invalid_comparison,
  insufficient_truncation,
  unsupported_ring,
  inconclusive,
  bad_ring,
  bad_json,
  unknown_field,
  non_canonical,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_input: return "malformed-input";
    case ErrorCode::containment_violation: return "containment-violation";
    case ErrorCode::not_well_defined: return "not-well-defined";
    case ErrorCode::ring_mismatch: return "ring-mismatch";
    case ErrorCode::bad_indices: return "bad-indices";
    case ErrorCode::not_a_complex: return "not-a-complex";
    case ErrorCode::not_a_chain_map: return "not-a-chain-map";
    case ErrorCode::not_torsion: return "not-torsion";
    case ErrorCode::invalid_comparison: return "invalid-comparison";
    case ErrorCode::insufficient_truncation: return "insufficient-truncation";
    case ErrorCode::unsupported_ring: return "unsupported-ring";
    case ErrorCode::inconclusive: return "inconclusive";
    case ErrorCode::bad_ring: return "bad-ring";
    case ErrorCode::bad_json: return "bad-json";
    case ErrorCode::unknown_field: return "unknown-field";
    case ErrorCode::non_canonical: return "non-canonical";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ddc
