#pragma once

#include <stdexcept>
#include <string>

namespace qcrb {

// Error categories. The CLI maps configuration-like categories to exit code 2
// and numerical failures to exit code 3.
enum class errc {
  config,
  shape,
  domain,
  capacity,
  insufficient_data,
  inadmissible_target,
  invalid_projector,
  boundary,
  rank_deficient_design,
  numerical_failure,
  singular_matrix,
  singular_model,
  singular_outcome,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const noexcept { return code_; }

  static bool is_numerical(errc c) noexcept {
    return c == errc::numerical_failure || c == errc::singular_matrix ||
           c == errc::singular_model || c == errc::singular_outcome;
  }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace qcrb
