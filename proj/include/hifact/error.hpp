#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hifact {

enum class ErrorCode {
  UnknownLabel,
  Io,
  Parse,
  Validation,
  EmptyCorpus,
  BadRatios,
  BadWeights,
  EmptyText,
  DegenerateEmbedding,
  Transport,
  Protocol,
  Remote,
  DimensionMismatch,
  DuplicateId,
  EmptyIndex,
  Format,
  NonFiniteInput,
  EmptyBatch,
  EmptySet,
  Divergence,
  LengthMismatch,
  EmptyInput,
  EmptyClaim,
  UnknownSplit,
  ModeMismatch,
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

// Errors that come from bad input data rather than the runtime environment.
bool is_data_error(ErrorCode code);

// Errors raised by a remote inference provider (encoder or generator).
bool is_upstream_error(ErrorCode code);

/// Single exception type for the library. `code()` identifies the failure
/// class; `position()` carries a line number (Parse) or byte offset (Format)
/// when one applies; `stage()` is set when a pipeline stage rethrows.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::uint64_t> position = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::uint64_t> position() const noexcept { return position_; }
  const std::string& stage() const noexcept { return stage_; }

  // Copy of this error with a stage label prepended to the message.
  Error with_stage(std::string_view stage) const;

 private:
  ErrorCode code_;
  std::optional<std::uint64_t> position_;
  std::string stage_;
};

}  // namespace hifact
