#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hifact/labels.hpp"

namespace hifact {

struct Claim {
  std::string id;
  std::string text;
  std::string speaker;
  std::string state;
  std::string date;  // ISO-8601 or empty; passed through untouched

  bool operator==(const Claim&) const = default;
};

struct EvidenceDoc {
  std::string id;
  std::string text;
  std::string url;

  bool operator==(const EvidenceDoc&) const = default;
};

struct AnnotatedClaim {
  Claim claim;
  EvidenceDoc evidence;
  VeracityLabel label = VeracityLabel::Unverified;
  std::optional<std::string> gold_explanation;

  bool operator==(const AnnotatedClaim&) const = default;
};

// Throws Error(Validation) naming the record id when text fields are blank.
void validate_record(const AnnotatedClaim& record);

bool is_blank(std::string_view text);

/// Fixed-width text embedding. Construction enforces the width and that every
/// component is finite, so any Embedding in hand is usable downstream.
class Embedding {
 public:
  static constexpr std::size_t kDim = 768;

  // Throws Error(DimensionMismatch) or Error(NonFiniteInput).
  explicit Embedding(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  bool operator==(const Embedding&) const = default;

 private:
  std::vector<double> values_;
};

struct FactCheckResult {
  VeracityLabel label = VeracityLabel::Unverified;
  double confidence = 0.0;
  std::array<double, kNumLabels> class_probabilities{};
  std::string evidence_id;
  std::string evidence_text;
  std::string evidence_url;
  double retrieval_distance = 0.0;  // squared L2
  std::string explanation;
  double rouge_l = 0.0;

  bool operator==(const FactCheckResult&) const = default;
};

nlohmann::ordered_json to_json(const FactCheckResult& result);
FactCheckResult fact_check_result_from_json(const nlohmann::json& j);

}  // namespace hifact
