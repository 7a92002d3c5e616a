#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hifact/classifier.hpp"
#include "hifact/dataset.hpp"
#include "hifact/encoding.hpp"
#include "hifact/explanation.hpp"
#include "hifact/metrics.hpp"
#include "hifact/vector_index.hpp"

namespace hifact {

// ClaimOnly feeds the 768-d claim embedding to the classifier; ClaimEvidence
// feeds [claim embedding, retrieved evidence vector] (1536-d).
enum class InputMode { ClaimOnly, ClaimEvidence };
enum class PromptLabelSource { Predicted, Gold };

std::string_view render_input_mode(InputMode mode);
InputMode parse_input_mode(std::string_view text);
std::string_view render_prompt_label_source(PromptLabelSource source);
PromptLabelSource parse_prompt_label_source(std::string_view text);
std::size_t classifier_input_dim(InputMode mode);

struct PipelineConfig {
  InputMode input_mode = InputMode::ClaimOnly;
  PromptLabelSource prompt_label_source = PromptLabelSource::Predicted;
  TrainConfig train;
};

nlohmann::ordered_json to_json(const PipelineConfig& config);

/// Everything verify() needs. Immutable once assembled; share via
/// shared_ptr<const PipelineArtifacts> across threads.
struct PipelineArtifacts {
  std::shared_ptr<const EmbeddingProvider> encoder;
  FlatIndex index;
  MLPParams params;
  std::shared_ptr<const ExplanationGenerator> generator;
  std::map<std::string, EvidenceDoc> evidence_store;
  PipelineConfig config;
  std::optional<TrainReport> train_report;

  // Dimensions agree and every index id resolves; throws Error(Validation)
  // or Error(ModeMismatch).
  void validate() const;
};

struct EvidenceIndex {
  FlatIndex index;
  std::map<std::string, EvidenceDoc> store;
};

/// Encodes each distinct evidence document once, in corpus order. Records
/// that share an evidence id must carry identical evidence; a conflict raises
/// Error(DuplicateId) with stage "index-build".
EvidenceIndex build_evidence_index(const Corpus& corpus, const EmbeddingProvider& encoder);

// Classifier input for a claim embedding and (in ClaimEvidence mode) the
// nearest evidence vector.
std::vector<double> classifier_features(InputMode mode, const Embedding& claim,
                                        const FlatIndex& index, const SearchHit* hit,
                                        bool zero_evidence = false);

PipelineArtifacts build_artifacts(const Corpus& corpus, const SplitAssignment& split,
                                  std::shared_ptr<const EmbeddingProvider> encoder,
                                  std::shared_ptr<const ExplanationGenerator> generator,
                                  const PipelineConfig& config);

// Assembles artifacts from persisted files; the input mode follows the
// checkpoint's input width.
PipelineArtifacts load_artifacts(const Corpus& corpus, const std::string& index_path,
                                 const std::string& checkpoint_path,
                                 std::shared_ptr<const EmbeddingProvider> encoder,
                                 std::shared_ptr<const ExplanationGenerator> generator,
                                 PromptLabelSource prompt_label_source =
                                     PromptLabelSource::Predicted);

// Replaces the trained classifier, e.g. with a stub for evaluation studies.
using PredictorFn =
    std::function<Prediction(std::span<const double> features, const AnnotatedClaim* record)>;

struct VerifyOptions {
  std::optional<VeracityLabel> gold_label;  // used when prompting with gold labels
  const AnnotatedClaim* record = nullptr;
  PredictorFn predictor;
  bool zero_evidence_features = false;
};

/// encode -> classify -> retrieve (k=1) -> prompt -> generate -> ROUGE-L.
/// In ClaimEvidence mode retrieval runs before classification, since the
/// retrieved vector is a classifier input. The claim is encoded once.
FactCheckResult verify(const PipelineArtifacts& artifacts, std::string_view claim_text,
                       const VerifyOptions& options = {});

struct EvalReport {
  std::string split;
  std::size_t n = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::array<ClassScores, kNumLabels> per_class{};
  double mean_rouge_l_evidence = 0.0;
  std::size_t n_with_gold_explanation = 0;
  std::optional<double> mean_rouge_l_gold;
  std::optional<double> corpus_bleu_gold;
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};  // [gold][pred]
  std::string fingerprint;

  bool operator==(const EvalReport&) const = default;
};

nlohmann::ordered_json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

struct EvalOptions {
  PredictorFn predictor;
  bool zero_evidence_features = false;
  BleuConfig bleu;
};

EvalReport evaluate(const PipelineArtifacts& artifacts, const Corpus& corpus,
                    const SplitAssignment& split, SplitName which,
                    const EvalOptions& options = {});
// Throws Error(UnknownSplit) for names other than train/val/test.
EvalReport evaluate(const PipelineArtifacts& artifacts, const Corpus& corpus,
                    const SplitAssignment& split, std::string_view which,
                    const EvalOptions& options = {});

struct AblationResult {
  EvalReport with_retrieval;
  EvalReport without_retrieval;
  double accuracy_delta = 0.0;  // with - without
};

nlohmann::ordered_json to_json(const AblationResult& result);

// Requires ClaimEvidence artifacts (Error(ModeMismatch) otherwise). The
// without-retrieval arm zeroes the evidence half of the classifier input.
AblationResult ablate_retrieval(const PipelineArtifacts& artifacts, const Corpus& corpus,
                                const SplitAssignment& split, SplitName which,
                                const EvalOptions& options = {});

struct NamedReport {
  std::string system;
  const EvalReport* report;
};

// Aligned text table: System | N | Accuracy | Macro-F1 | ROUGE-L | BLEU.
std::string render_report_table(const std::vector<NamedReport>& rows);

// Confusion-matrix consistency: row sums equal per-class support and the
// total equals n.
bool report_is_consistent(const EvalReport& report);

}  // namespace hifact
