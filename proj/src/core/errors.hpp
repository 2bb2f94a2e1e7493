#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mutfront {

enum class Errc {
  invalid_argument,      // bad value passed to an operation
  invalid_profile,       // initial data violates sign/support requirements
  degenerate_interval,   // h <= g, empty habitat
  transform_out_of_range,// fixed-frame change of variables not valid here
  wrong_regime,          // operation needs a different interaction regime
  wrong_parameter,       // scalar knob outside its admissible range
  inadmissible_rate,     // certificate construction has no positive margin
  precondition_violated, // runtime data fails a documented precondition
  mismatched_runs,       // trajectories not comparable (grids/params differ)
  insufficient_data,     // not enough usable records for a fit
  parse_error,           // malformed configuration input
  schema_mismatch,       // configuration schema_version not supported
  validation_error,      // well-formed config with inconsistent contents
  io_error,              // filesystem read/write failure
  unstable,              // solver produced non-finite values it cannot recover
  internal,              // broken invariant inside the library itself
};

inline const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::invalid_profile: return "invalid_profile";
    case Errc::degenerate_interval: return "degenerate_interval";
    case Errc::transform_out_of_range: return "transform_out_of_range";
    case Errc::wrong_regime: return "wrong_regime";
    case Errc::wrong_parameter: return "wrong_parameter";
    case Errc::inadmissible_rate: return "inadmissible_rate";
    case Errc::precondition_violated: return "precondition_violated";
    case Errc::mismatched_runs: return "mismatched_runs";
    case Errc::insufficient_data: return "insufficient_data";
    case Errc::parse_error: return "parse_error";
    case Errc::schema_mismatch: return "schema_mismatch";
    case Errc::validation_error: return "validation_error";
    case Errc::io_error: return "io_error";
    case Errc::unstable: return "unstable";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
public:
  Error(Errc code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, std::string msg) {
  throw Error(code, std::move(msg));
}

}  // namespace mutfront
