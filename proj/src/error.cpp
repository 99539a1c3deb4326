#include "lowdim/error.hpp"

#include <cctype>
#include <string>

#include "lowdim/types.hpp"

namespace lowdim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDuplicatePoints: return "DuplicatePoints";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kUnknownKind: return "UnknownKind";
    case ErrorCode::kBadParams: return "BadParams";
    case ErrorCode::kPaddingUnachievable: return "PaddingUnachievable";
    case ErrorCode::kNotEuclidean: return "NotEuclidean";
    case ErrorCode::kClusterTooLarge: return "ClusterTooLarge";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kEmptyNetIntersection: return "EmptyNetIntersection";
    case ErrorCode::kProjectionFailed: return "ProjectionFailed";
    case ErrorCode::kDuplicateSources: return "DuplicateSources";
    case ErrorCode::kExtensionDidNotConverge: return "ExtensionDidNotConverge";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::kL1: return "1";
    case Norm::kL2: return "2";
    case Norm::kLinf: return "inf";
  }
  return "?";
}

Norm parse_norm(std::string_view text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "1" || t == "l1") return Norm::kL1;
  if (t == "2" || t == "l2") return Norm::kL2;
  if (t == "inf" || t == "linf" || t == "l_inf" || t == "infinity") return Norm::kLinf;
  throw Error(ErrorCode::kBadParams, "unknown norm '" + std::string(text) + "'");
}

}  // namespace lowdim
