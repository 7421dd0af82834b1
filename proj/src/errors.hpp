#pragma once

#include <stdexcept>
#include <string>

namespace noisy {

enum class Errc {
  invalid_argument,
  parse,
  dimension_mismatch,
  not_majorized,
  ancilla_too_small,
  insufficient_n,
  not_hermitian,
  not_positive,
  target_no_information,
  decomposition_stalled,
  overflow,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::parse: return "ParseError";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::not_majorized: return "NotMajorized";
    case Errc::ancilla_too_small: return "AncillaTooSmall";
    case Errc::insufficient_n: return "InsufficientN";
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::not_positive: return "NotPositive";
    case Errc::target_no_information: return "TargetHasNoInformation";
    case Errc::decomposition_stalled: return "DecompositionStalled";
    case Errc::overflow: return "Overflow";
    case Errc::internal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace noisy
