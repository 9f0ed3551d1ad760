#include "vmine/error.hpp"

namespace vmine {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::kDuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kUnknownNodeId: return "UnknownNodeId";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kUnknownCluster: return "UnknownCluster";
    case ErrorCode::kBadTarget: return "BadTarget";
    case ErrorCode::kUnlabeledCluster: return "UnlabeledCluster";
    case ErrorCode::kTooFewEdges: return "TooFewEdges";
    case ErrorCode::kUnknownAttribute: return "UnknownAttribute";
    case ErrorCode::kUnknownCategory: return "UnknownCategory";
    case ErrorCode::kDegenerateGlobal: return "DegenerateGlobal";
    case ErrorCode::kNotIntegerAttribute: return "NotIntegerAttribute";
    case ErrorCode::kEmptyClusterGraph: return "EmptyClusterGraph";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kMissingArtifact: return "MissingArtifact";
    case ErrorCode::kUnknownDataset: return "UnknownDataset";
    case ErrorCode::kUnknownSession: return "UnknownSession";
    case ErrorCode::kNothingToUndo: return "NothingToUndo";
    case ErrorCode::kNothingToRedo: return "NothingToRedo";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace vmine
