#include "hifact/encoding.hpp"

#include <cmath>
#include <cstdlib>

#include "hifact/error.hpp"
#include "hifact/text.hpp"

namespace hifact {

void EncoderConfig::validate() const {
  if (max_sequence_tokens < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_sequence_tokens must be >= 1");
  }
  if (timeout_ms < 1) throw Error(ErrorCode::InvalidArgument, "timeout_ms must be >= 1");
  if (max_in_flight < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_in_flight must be >= 1");
  }
}

std::vector<Embedding> EmbeddingProvider::batch_encode(
    std::span<const std::string> texts) const {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    try {
      out.push_back(encode(texts[i]));
    } catch (const Error& e) {
      throw e.with_stage("text " + std::to_string(i));
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view token) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : token) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Embedding encode_reference(std::string_view text, const EncoderConfig& config) {
  if (is_blank(text)) throw Error(ErrorCode::EmptyText, "cannot encode blank text");
  TokenList tokens = tokenize_whitespace(text);
  if (tokens.size() > config.max_sequence_tokens) {
    tokens.resize(config.max_sequence_tokens);
  }
  std::vector<double> v(Embedding::kDim, 0.0);
  for (const auto& t : tokens) {
    const std::uint64_t h = fnv1a64(t);
    v[h % Embedding::kDim] += (h >> 63) == 0 ? 1.0 : -1.0;
  }
  // Coordinates are small integers, so the squared norm is exact.
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  if (norm2 == 0.0) {
    throw Error(ErrorCode::DegenerateEmbedding,
                "token contributions cancel to the zero vector");
  }
  const double norm = std::sqrt(norm2);
  for (double& x : v) x /= norm;
  return Embedding(std::move(v));
}

ReferenceEncoder::ReferenceEncoder(EncoderConfig config) : config_(std::move(config)) {
  config_.validate();
}

Embedding ReferenceEncoder::encode(std::string_view text) const {
  return encode_reference(text, config_);
}

std::string resolve_encoder_endpoint(const EncoderConfig& config) {
  if (!config.remote_endpoint.empty()) return config.remote_endpoint;
  if (const char* env = std::getenv("HIFACT_ENCODER_URL"); env && *env) return env;
  throw Error(ErrorCode::InvalidArgument,
              "no encoder endpoint configured (set HIFACT_ENCODER_URL)");
}

RemoteEncoder::RemoteEncoder(EncoderConfig config) : config_(std::move(config)) {
  config_.validate();
  config_.remote_endpoint = resolve_encoder_endpoint(config_);
  client_ = std::make_unique<JsonHttpClient>(config_.remote_endpoint,
                                             config_.timeout_ms, config_.max_in_flight);
}

std::vector<Embedding> RemoteEncoder::request(std::span<const std::string> texts) const {
  nlohmann::json body;
  body["texts"] = nlohmann::json::array();
  for (const auto& t : texts) body["texts"].push_back(t);
  const nlohmann::json reply = client_->post(body);

  const auto it = reply.find("embeddings");
  if (it == reply.end() || !it->is_array()) {
    throw Error(ErrorCode::Protocol, "response lacks an 'embeddings' array");
  }
  if (it->size() != texts.size()) {
    throw Error(ErrorCode::Protocol, "expected " + std::to_string(texts.size()) +
                                         " embeddings, got " +
                                         std::to_string(it->size()));
  }
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& row : *it) {
    if (!row.is_array()) throw Error(ErrorCode::Protocol, "embedding is not an array");
    if (row.size() != Embedding::kDim) {
      throw Error(ErrorCode::Protocol, "dimension " + std::to_string(row.size()) +
                                           " != " + std::to_string(Embedding::kDim));
    }
    std::vector<double> values;
    values.reserve(row.size());
    for (const auto& x : row) {
      if (!x.is_number()) {
        throw Error(ErrorCode::Protocol, "embedding contains a non-number");
      }
      const double d = x.get<double>();
      if (!std::isfinite(d)) {
        throw Error(ErrorCode::Protocol, "embedding contains a non-finite value");
      }
      values.push_back(d);
    }
    out.emplace_back(std::move(values));
  }
  return out;
}

Embedding RemoteEncoder::encode(std::string_view text) const {
  if (is_blank(text)) throw Error(ErrorCode::EmptyText, "cannot encode blank text");
  const std::string owned(text);
  return std::move(request(std::span<const std::string>(&owned, 1)).front());
}

std::vector<Embedding> RemoteEncoder::batch_encode(
    std::span<const std::string> texts) const {
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (is_blank(texts[i])) {
      throw Error(ErrorCode::EmptyText, "cannot encode blank text")
          .with_stage("text " + std::to_string(i));
    }
  }
  constexpr std::size_t kChunk = 32;
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += kChunk) {
    const auto chunk = texts.subspan(start, std::min(kChunk, texts.size() - start));
    try {
      for (auto& e : request(chunk)) out.push_back(std::move(e));
    } catch (const Error& e) {
      throw e.with_stage("text " + std::to_string(start));
    }
  }
  return out;
}

Embedding encode_remote(std::string_view text, const EncoderConfig& config) {
  return RemoteEncoder(config).encode(text);
}

std::vector<Embedding> batch_encode(std::span<const std::string> texts,
                                    const EmbeddingProvider& provider) {
  return provider.batch_encode(texts);
}

}  // namespace hifact
