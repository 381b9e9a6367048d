#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mpses {

enum class ErrorCode {
  Parse,
  UndefinedName,
  NonContractive,
  DuplicateBranchLabel,
  DuplicateDefinition,
  DuplicateParticipant,
  EmptyChoice,
  MixedChoicePeers,
  SelfCommunication,
  NotEnabled,
  NotWellFormed,
  Undefined,
  NotBinary,
  LabelCollision,
  GenerationExhausted,
};

std::string error_code_name(ErrorCode code);

// Single exception type for the library. The code tells callers (and the CLI)
// how to classify the failure; `index` is filled in by multi-step execution.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace mpses
