#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ulmt {

enum class errc {
  invalid_size,
  invalid_element,
  invalid_axioms,
  syntax_error,
  unknown_symbol,
  arity_mismatch,
  uncovered_variable,
  not_a_sentence,
  enumeration_too_large,
  search_space_too_large,
  subset_cap_exceeded,
  signature_mismatch,
  not_a_chain,
  inconsistent_input,
  constants_exhausted,
  not_a_type,
  bounds_exhausted,
  io_error,
};

inline const char* to_string(errc code) {
  switch (code) {
    case errc::invalid_size: return "invalid-size";
    case errc::invalid_element: return "invalid-element";
    case errc::invalid_axioms: return "invalid-axioms";
    case errc::syntax_error: return "syntax-error";
    case errc::unknown_symbol: return "unknown-symbol";
    case errc::arity_mismatch: return "arity-mismatch";
    case errc::uncovered_variable: return "uncovered-variable";
    case errc::not_a_sentence: return "not-a-sentence";
    case errc::enumeration_too_large: return "enumeration-too-large";
    case errc::search_space_too_large: return "search-space-too-large";
    case errc::subset_cap_exceeded: return "subset-cap-exceeded";
    case errc::signature_mismatch: return "signature-mismatch";
    case errc::not_a_chain: return "not-a-chain";
    case errc::inconsistent_input: return "inconsistent-input";
    case errc::constants_exhausted: return "constants-exhausted";
    case errc::not_a_type: return "not-a-type";
    case errc::bounds_exhausted: return "bounds-exhausted";
    case errc::io_error: return "io-error";
  }
  return "unknown";
}

/// Every failure raised by the library. `code()` classifies it; `offset()` is
/// set for syntax errors (byte offset into the parsed text).
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message, std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), offset_(offset) {}

  errc code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  errc code_;
  std::optional<std::size_t> offset_;
};

}  // namespace ulmt
