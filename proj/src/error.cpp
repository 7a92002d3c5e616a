#include "hifact/error.hpp"

namespace hifact {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::BadRatios: return "BadRatios";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::DegenerateEmbedding: return "DegenerateEmbedding";
    case ErrorCode::Transport: return "TransportError";
    case ErrorCode::Protocol: return "ProtocolError";
    case ErrorCode::Remote: return "RemoteError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::Format: return "FormatError";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::Divergence: return "DivergenceError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyClaim: return "EmptyClaim";
    case ErrorCode::UnknownSplit: return "UnknownSplit";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_data_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
    case ErrorCode::Transport:
    case ErrorCode::Protocol:
    case ErrorCode::Remote:
    case ErrorCode::Divergence:
      return false;
    default:
      return true;
  }
}

bool is_upstream_error(ErrorCode code) {
  return code == ErrorCode::Transport || code == ErrorCode::Protocol ||
         code == ErrorCode::Remote;
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::uint64_t> position)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      position_(position) {}

Error Error::with_stage(std::string_view stage) const {
  Error copy(*this);
  static_cast<std::runtime_error&>(copy) =
      std::runtime_error("[" + std::string(stage) + "] " + what());
  copy.stage_ = std::string(stage);
  return copy;
}

}  // namespace hifact
