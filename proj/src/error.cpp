#include "thzsaga/error.hpp"

namespace thz {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::out_of_domain: return "out_of_domain";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::singularity: return "singularity";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::degenerate_plasma: return "degenerate_plasma";
    case ErrorCode::evanescent: return "evanescent";
    case ErrorCode::model_domain: return "model_domain";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::no_solution: return "no_solution";
    case ErrorCode::parse: return "parse";
    case ErrorCode::validation: return "validation";
    case ErrorCode::missing_key: return "missing_key";
    case ErrorCode::unknown_key: return "unknown_key";
    case ErrorCode::io: return "io";
    case ErrorCode::checksum: return "checksum";
  }
  return "unknown";
}

static std::string compose(ErrorCode code, const std::string& what, const std::string& where) {
  std::string s = std::string("[") + to_string(code) + "] ";
  if (!where.empty()) s += where + ": ";
  return s + what;
}

Error::Error(ErrorCode code, const std::string& what, std::string where)
    : std::runtime_error(compose(code, what, where)), code_(code), where_(std::move(where)) {}

}  // namespace thz
