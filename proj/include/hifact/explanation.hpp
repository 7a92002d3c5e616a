#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "hifact/labels.hpp"
#include "hifact/remote.hpp"

namespace hifact {

// "true", "false", "partially true", "unverified".
std::string_view label_phrase(VeracityLabel label);

// "Explain why the claim is <phrase>: <claim>\nEvidence: <evidence>".
// Throws Error(EmptyText) when claim or evidence is blank.
std::string build_prompt(std::string_view claim_text, std::string_view evidence_text,
                         VeracityLabel label);

struct GenerationRequest {
  std::string prompt;
  std::string claim_text;
  std::string evidence_text;
  VeracityLabel label = VeracityLabel::Unverified;
};

class ExplanationGenerator {
 public:
  virtual ~ExplanationGenerator() = default;
  // Returns a non-empty explanation.
  virtual std::string generate(const GenerationRequest& request) const = 0;
  virtual std::string name() const = 0;
};

/// Deterministic template explanation quoting the first 30 evidence tokens.
std::string generate_reference(std::string_view prompt, std::string_view claim_text,
                               std::string_view evidence_text, VeracityLabel label);

class ReferenceGenerator final : public ExplanationGenerator {
 public:
  std::string generate(const GenerationRequest& request) const override;
  std::string name() const override { return "reference"; }
};

struct GeneratorConfig {
  std::string remote_endpoint;  // falls back to $HIFACT_GENERATOR_URL
  int timeout_ms = 60000;
  int max_in_flight = 8;
  int max_new_tokens = 128;
};

std::string resolve_generator_endpoint(const GeneratorConfig& config);

/// POST {"prompt": ..., "max_new_tokens": n} -> {"text": ...}; the reply is
/// trimmed and must be non-empty (Error(Protocol) otherwise).
class RemoteGenerator final : public ExplanationGenerator {
 public:
  explicit RemoteGenerator(GeneratorConfig config);

  std::string generate(const GenerationRequest& request) const override;
  std::string name() const override { return "remote"; }

 private:
  GeneratorConfig config_;
  std::unique_ptr<JsonHttpClient> client_;
};

std::string generate_remote(std::string_view prompt, const GeneratorConfig& config);

}  // namespace hifact
