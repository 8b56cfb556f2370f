#include "mbtgen/error.hpp"

namespace mbtgen {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidTitle:
      return "InvalidTitle";
    case ErrorCode::kUnusableName:
      return "UnusableName";
    case ErrorCode::kDanglingEndpoint:
      return "DanglingEndpoint";
    case ErrorCode::kDuplicateId:
      return "DuplicateId";
    case ErrorCode::kSessionNotActive:
      return "SessionNotActive";
    case ErrorCode::kLayoutMissing:
      return "LayoutMissing";
    case ErrorCode::kStorageFailure:
      return "StorageFailure";
    case ErrorCode::kInvalidDelay:
      return "InvalidDelay";
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace mbtgen
