#include "hifact/types.hpp"

#include <cmath>

#include "hifact/error.hpp"

namespace hifact {

bool is_blank(std::string_view text) {
  return text.find_first_not_of(" \t\r\n\v\f") == std::string_view::npos;
}

void validate_record(const AnnotatedClaim& record) {
  const std::string& id = record.claim.id;
  if (is_blank(id)) throw Error(ErrorCode::Validation, "record with empty id");
  if (is_blank(record.claim.text)) {
    throw Error(ErrorCode::Validation, "record '" + id + "': empty claim text");
  }
  if (is_blank(record.evidence.id)) {
    throw Error(ErrorCode::Validation, "record '" + id + "': empty evidence id");
  }
  if (is_blank(record.evidence.text)) {
    throw Error(ErrorCode::Validation,
                "record '" + id + "': empty evidence text");
  }
}

Embedding::Embedding(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() != kDim) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimension " + std::to_string(values_.size()) +
                    " != " + std::to_string(kDim));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::NonFiniteInput,
                  "non-finite embedding component at " + std::to_string(i));
    }
  }
}

nlohmann::ordered_json to_json(const FactCheckResult& result) {
  nlohmann::ordered_json j;
  j["label"] = std::string(render_label(result.label));
  j["confidence"] = result.confidence;
  j["class_probabilities"] = result.class_probabilities;
  j["evidence_id"] = result.evidence_id;
  j["evidence_text"] = result.evidence_text;
  j["evidence_url"] = result.evidence_url;
  j["retrieval_distance"] = result.retrieval_distance;
  j["explanation"] = result.explanation;
  j["rouge_l"] = result.rouge_l;
  return j;
}

FactCheckResult fact_check_result_from_json(const nlohmann::json& j) {
  FactCheckResult r;
  r.label = parse_label(j.at("label").get<std::string>());
  r.confidence = j.at("confidence").get<double>();
  r.class_probabilities =
      j.at("class_probabilities").get<std::array<double, kNumLabels>>();
  r.evidence_id = j.at("evidence_id").get<std::string>();
  r.evidence_text = j.at("evidence_text").get<std::string>();
  r.evidence_url = j.at("evidence_url").get<std::string>();
  r.retrieval_distance = j.at("retrieval_distance").get<double>();
  r.explanation = j.at("explanation").get<std::string>();
  r.rouge_l = j.at("rouge_l").get<double>();
  return r;
}

}  // namespace hifact
