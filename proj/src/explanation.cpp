#include "hifact/explanation.hpp"

#include <cstdlib>

#include "hifact/error.hpp"
#include "hifact/text.hpp"
#include "hifact/types.hpp"

namespace hifact {

namespace {

constexpr std::size_t kQuotedEvidenceTokens = 30;

std::string_view verdict_verb(VeracityLabel label) {
  switch (label) {
    case VeracityLabel::True: return "supports";
    case VeracityLabel::False: return "contradicts";
    case VeracityLabel::PartiallyTrue: return "partially supports";
    case VeracityLabel::Unverified: return "neither supports nor refutes";
  }
  return "neither supports nor refutes";
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n\v\f");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n\v\f");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view label_phrase(VeracityLabel label) {
  switch (label) {
    case VeracityLabel::True: return "true";
    case VeracityLabel::False: return "false";
    case VeracityLabel::PartiallyTrue: return "partially true";
    case VeracityLabel::Unverified: return "unverified";
  }
  return "unverified";
}

std::string build_prompt(std::string_view claim_text, std::string_view evidence_text,
                         VeracityLabel label) {
  if (is_blank(claim_text)) throw Error(ErrorCode::EmptyText, "prompt needs a claim");
  if (is_blank(evidence_text)) throw Error(ErrorCode::EmptyText, "prompt needs evidence");
  std::string prompt = "Explain why the claim is ";
  prompt += label_phrase(label);
  prompt += ": ";
  prompt += trim(claim_text);
  prompt += "\nEvidence: ";
  prompt += trim(evidence_text);
  return prompt;
}

std::string generate_reference(std::string_view prompt, std::string_view claim_text,
                               std::string_view evidence_text, VeracityLabel label) {
  if (is_blank(prompt) || is_blank(claim_text) || is_blank(evidence_text)) {
    throw Error(ErrorCode::EmptyText, "reference generator needs prompt, claim and evidence");
  }
  const auto raw = split_raw(evidence_text);
  std::string quoted;
  if (raw.size() <= kQuotedEvidenceTokens) {
    quoted = trim(evidence_text);
  } else {
    for (std::size_t i = 0; i < kQuotedEvidenceTokens; ++i) {
      if (i) quoted += ' ';
      quoted += raw[i];
    }
  }
  std::string out = "The claim is assessed as ";
  out += label_phrase(label);
  out += ". The retrieved evidence states: \"";
  out += quoted;
  out += "\". This ";
  out += verdict_verb(label);
  out += " the claim.";
  return out;
}

std::string ReferenceGenerator::generate(const GenerationRequest& request) const {
  return generate_reference(request.prompt, request.claim_text, request.evidence_text,
                            request.label);
}

std::string resolve_generator_endpoint(const GeneratorConfig& config) {
  if (!config.remote_endpoint.empty()) return config.remote_endpoint;
  if (const char* env = std::getenv("HIFACT_GENERATOR_URL"); env && *env) return env;
  throw Error(ErrorCode::InvalidArgument,
              "no generator endpoint configured (set HIFACT_GENERATOR_URL)");
}

RemoteGenerator::RemoteGenerator(GeneratorConfig config) : config_(std::move(config)) {
  if (config_.max_new_tokens < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_new_tokens must be >= 1");
  }
  config_.remote_endpoint = resolve_generator_endpoint(config_);
  client_ = std::make_unique<JsonHttpClient>(config_.remote_endpoint, config_.timeout_ms,
                                             config_.max_in_flight);
}

std::string RemoteGenerator::generate(const GenerationRequest& request) const {
  if (is_blank(request.prompt)) throw Error(ErrorCode::EmptyText, "empty prompt");
  nlohmann::json body;
  body["prompt"] = request.prompt;
  body["max_new_tokens"] = config_.max_new_tokens;
  const nlohmann::json reply = client_->post(body);
  const auto it = reply.find("text");
  if (it == reply.end() || !it->is_string()) {
    throw Error(ErrorCode::Protocol, "response lacks a string 'text' field");
  }
  std::string text = trim(it->get<std::string>());
  if (text.empty()) throw Error(ErrorCode::Protocol, "generator returned empty text");
  return text;
}

std::string generate_remote(std::string_view prompt, const GeneratorConfig& config) {
  GenerationRequest request;
  request.prompt = std::string(prompt);
  return RemoteGenerator(config).generate(request);
}

}  // namespace hifact
