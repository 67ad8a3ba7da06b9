#pragma once

#include <stdexcept>
#include <string>

namespace thz {

enum class ErrorCode {
  out_of_domain,
  convergence,
  singularity,
  out_of_range,
  degenerate_plasma,
  evanescent,
  model_domain,
  numerical,
  no_solution,
  parse,
  validation,
  missing_key,
  unknown_key,
  io,
  checksum,
};

const char* to_string(ErrorCode code);

// Every failure carries a machine-readable code and a location string
// (file:line, key name, layer name or function) alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::string where = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::string where_;
};

}  // namespace thz
