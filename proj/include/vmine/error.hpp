#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vmine {

enum class ErrorCode {
  kUnknownEndpoint,
  kDuplicateNodeId,
  kSelfLoop,
  kUnknownNodeId,
  kEmptyGraph,
  kUnknownCluster,
  kBadTarget,
  kUnlabeledCluster,
  kTooFewEdges,
  kUnknownAttribute,
  kUnknownCategory,
  kDegenerateGlobal,
  kNotIntegerAttribute,
  kEmptyClusterGraph,
  kParseError,
  kSchemaMismatch,
  kMissingArtifact,
  kUnknownDataset,
  kUnknownSession,
  kNothingToUndo,
  kNothingToRedo,
  kInvalidConfig,
};

/// Stable identifier used in JSON error payloads, e.g. "UnknownEndpoint".
std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code. `item` is the position of the
/// offending record in the input list when one applies (node or edge
/// declaration index); the ingest layer turns it into a file line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string detail = {},
        std::optional<std::size_t> item = std::nullopt)
      : std::runtime_error(std::move(message)),
        code_(code),
        detail_(std::move(detail)),
        item_(item) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> item() const noexcept { return item_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> item_;
};

}  // namespace vmine
