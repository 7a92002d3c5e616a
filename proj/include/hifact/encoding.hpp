#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hifact/remote.hpp"
#include "hifact/types.hpp"

namespace hifact {

struct EncoderConfig {
  std::size_t max_sequence_tokens = 128;
  std::string remote_endpoint;  // falls back to $HIFACT_ENCODER_URL
  int timeout_ms = 30000;
  int max_in_flight = 8;
  std::string model_name = "google/muril-base-cased";

  // Throws Error(InvalidArgument).
  void validate() const;
};

/// Text to 768-d embedding. Implementations are shareable across threads and
/// deterministic for a fixed configuration.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual Embedding encode(std::string_view text) const = 0;

  // Order-preserving; element i equals encode(texts[i]). On failure rethrows
  // the first error with "text <i>" in its stage.
  virtual std::vector<Embedding> batch_encode(std::span<const std::string> texts) const;

  virtual std::size_t dimension() const { return Embedding::kDim; }
  virtual std::size_t max_sequence_tokens() const = 0;
  virtual std::string name() const = 0;
};

// FNV-1a 64-bit over the UTF-8 bytes of `token`.
std::uint64_t fnv1a64(std::string_view token);

/// Feature-hashed bag of tokens: each token (after tokenize_whitespace and
/// truncation) adds +1 or -1 at coordinate (h mod 768), sign from the top bit
/// of h; the sum is L2-normalized.
Embedding encode_reference(std::string_view text, const EncoderConfig& config);

class ReferenceEncoder final : public EmbeddingProvider {
 public:
  explicit ReferenceEncoder(EncoderConfig config = {});

  Embedding encode(std::string_view text) const override;
  std::size_t max_sequence_tokens() const override {
    return config_.max_sequence_tokens;
  }
  std::string name() const override { return "reference"; }

 private:
  EncoderConfig config_;
};

/// Client for an out-of-process embedding server. Wire format:
///   request  POST {"texts": [string, ...]}
///   response {"embeddings": [[float x 768], ...]}
/// Pooling is the server's business.
class RemoteEncoder final : public EmbeddingProvider {
 public:
  explicit RemoteEncoder(EncoderConfig config);

  Embedding encode(std::string_view text) const override;
  std::vector<Embedding> batch_encode(std::span<const std::string> texts) const override;
  std::size_t max_sequence_tokens() const override {
    return config_.max_sequence_tokens;
  }
  std::string name() const override { return "remote"; }

 private:
  std::vector<Embedding> request(std::span<const std::string> texts) const;

  EncoderConfig config_;
  std::unique_ptr<JsonHttpClient> client_;
};

Embedding encode_remote(std::string_view text, const EncoderConfig& config);

std::vector<Embedding> batch_encode(std::span<const std::string> texts,
                                    const EmbeddingProvider& provider);

// Resolves the remote endpoint from config, then $HIFACT_ENCODER_URL.
std::string resolve_encoder_endpoint(const EncoderConfig& config);

}  // namespace hifact
