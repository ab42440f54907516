#pragma once

#include <stdexcept>
#include <string>

namespace parafol {

// Numeric values mirror parafol_status in parafol.h.
enum class ErrorCode {
  kParameter = 1,
  kDomain = 2,
  kDegenerate = 3,
  kLayout = 4,
  kNotAKnot = 5,
  kPositiveDefinite = 6,
  kInterface = 7,
  kIo = 8,
  kUnknownScenario = 9,
  kResource = 10,
  kParse = 11,
  kInternal = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace parafol
