#include "hifact/pipeline.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include "hifact/error.hpp"

namespace hifact {

std::string_view render_input_mode(InputMode mode) {
  return mode == InputMode::ClaimOnly ? "claim" : "claim+evidence";
}

InputMode parse_input_mode(std::string_view text) {
  if (text == "claim") return InputMode::ClaimOnly;
  if (text == "claim+evidence" || text == "concat") return InputMode::ClaimEvidence;
  throw Error(ErrorCode::InvalidArgument, "unknown input mode '" + std::string(text) + "'");
}

std::string_view render_prompt_label_source(PromptLabelSource source) {
  return source == PromptLabelSource::Predicted ? "predicted" : "gold";
}

PromptLabelSource parse_prompt_label_source(std::string_view text) {
  if (text == "predicted") return PromptLabelSource::Predicted;
  if (text == "gold") return PromptLabelSource::Gold;
  throw Error(ErrorCode::InvalidArgument,
              "unknown prompt label source '" + std::string(text) + "'");
}

std::size_t classifier_input_dim(InputMode mode) {
  return mode == InputMode::ClaimOnly ? Embedding::kDim : 2 * Embedding::kDim;
}

nlohmann::ordered_json to_json(const PipelineConfig& config) {
  nlohmann::ordered_json j;
  j["input_mode"] = std::string(render_input_mode(config.input_mode));
  j["prompt_label_source"] =
      std::string(render_prompt_label_source(config.prompt_label_source));
  j["train"] = to_json(config.train);
  return j;
}

void PipelineArtifacts::validate() const {
  if (!encoder || !generator) {
    throw Error(ErrorCode::Validation, "artifacts need an encoder and a generator");
  }
  if (index.dim() != encoder->dimension() || index.dim() != Embedding::kDim) {
    throw Error(ErrorCode::Validation, "index dimension does not match the encoder");
  }
  if (params.input_dim != classifier_input_dim(config.input_mode)) {
    throw Error(ErrorCode::ModeMismatch,
                "classifier input width " + std::to_string(params.input_dim) +
                    " does not match input mode " +
                    std::string(render_input_mode(config.input_mode)));
  }
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (!evidence_store.count(index.id_at(i))) {
      throw Error(ErrorCode::Validation,
                  "indexed evidence '" + index.id_at(i) + "' missing from the store");
    }
  }
}

EvidenceIndex build_evidence_index(const Corpus& corpus, const EmbeddingProvider& encoder) {
  EvidenceIndex out{FlatIndex(encoder.dimension()), {}};
  std::vector<std::string> texts;
  std::vector<std::string> ids;
  for (const auto& r : corpus.records) {
    const auto it = out.store.find(r.evidence.id);
    if (it != out.store.end()) {
      if (it->second != r.evidence) {
        throw Error(ErrorCode::DuplicateId, "evidence id '" + r.evidence.id +
                                                "' used for different documents")
            .with_stage("index-build");
      }
      continue;
    }
    out.store.emplace(r.evidence.id, r.evidence);
    ids.push_back(r.evidence.id);
    texts.push_back(r.evidence.text);
  }
  try {
    const std::vector<Embedding> vectors = encoder.batch_encode(texts);
    for (std::size_t i = 0; i < ids.size(); ++i) out.index.add(ids[i], vectors[i]);
  } catch (const Error& e) {
    throw e.with_stage("index-build");
  }
  return out;
}

std::vector<double> classifier_features(InputMode mode, const Embedding& claim,
                                        const FlatIndex& index, const SearchHit* hit,
                                        bool zero_evidence) {
  std::vector<double> features(claim.values().begin(), claim.values().end());
  if (mode == InputMode::ClaimOnly) return features;
  features.resize(2 * Embedding::kDim, 0.0);
  if (!zero_evidence && hit) {
    const auto pos = index.position_of(hit->evidence_id);
    if (!pos) throw Error(ErrorCode::Validation, "hit '" + hit->evidence_id + "' not indexed");
    const auto stored = index.vector_at(*pos);
    for (std::size_t i = 0; i < Embedding::kDim; ++i) {
      features[Embedding::kDim + i] = static_cast<double>(stored[i]);
    }
  }
  return features;
}

namespace {

std::vector<TrainingExample> make_examples(const std::vector<const AnnotatedClaim*>& records,
                                           const EmbeddingProvider& encoder,
                                           const FlatIndex& index, InputMode mode) {
  std::vector<std::string> texts;
  for (const auto* r : records) texts.push_back(r->claim.text);
  const std::vector<Embedding> claims = encoder.batch_encode(texts);
  std::vector<TrainingExample> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::optional<SearchHit> hit;
    if (mode == InputMode::ClaimEvidence) hit = index.search(claims[i], 1).front();
    out.push_back({classifier_features(mode, claims[i], index, hit ? &*hit : nullptr),
                   records[i]->label});
  }
  return out;
}

}  // namespace

PipelineArtifacts build_artifacts(const Corpus& corpus, const SplitAssignment& split,
                                  std::shared_ptr<const EmbeddingProvider> encoder,
                                  std::shared_ptr<const ExplanationGenerator> generator,
                                  const PipelineConfig& config) {
  if (!encoder || !generator) {
    throw Error(ErrorCode::InvalidArgument, "build_artifacts needs an encoder and a generator");
  }
  if (split.total() != corpus.size()) {
    throw Error(ErrorCode::Validation, "split does not cover the corpus");
  }
  PipelineArtifacts art;
  art.encoder = encoder;
  art.generator = generator;
  art.config = config;

  EvidenceIndex built = build_evidence_index(corpus, *encoder);
  art.index = std::move(built.index);
  art.evidence_store = std::move(built.store);

  std::vector<TrainingExample> train_set, val_set;
  try {
    train_set = make_examples(split_records(corpus, split, SplitName::Train), *encoder,
                              art.index, config.input_mode);
    val_set = make_examples(split_records(corpus, split, SplitName::Val), *encoder,
                            art.index, config.input_mode);
  } catch (const Error& e) {
    throw e.with_stage("claim-encode");
  }
  try {
    TrainResult trained = train(train_set, val_set, config.train);
    art.params = std::move(trained.params);
    art.train_report = std::move(trained.report);
  } catch (const Error& e) {
    throw e.with_stage("train");
  }
  art.validate();
  return art;
}

PipelineArtifacts load_artifacts(const Corpus& corpus, const std::string& index_path,
                                 const std::string& checkpoint_path,
                                 std::shared_ptr<const EmbeddingProvider> encoder,
                                 std::shared_ptr<const ExplanationGenerator> generator,
                                 PromptLabelSource prompt_label_source) {
  PipelineArtifacts art;
  art.encoder = std::move(encoder);
  art.generator = std::move(generator);
  art.index = FlatIndex::load(index_path);
  art.params = checkpoint_load(checkpoint_path);
  if (art.params.input_dim == Embedding::kDim) {
    art.config.input_mode = InputMode::ClaimOnly;
  } else if (art.params.input_dim == 2 * Embedding::kDim) {
    art.config.input_mode = InputMode::ClaimEvidence;
  } else {
    throw Error(ErrorCode::ModeMismatch, "checkpoint input width " +
                                             std::to_string(art.params.input_dim) +
                                             " matches no input mode");
  }
  art.config.prompt_label_source = prompt_label_source;
  art.config.train.hidden_width = art.params.hidden;
  for (const auto& r : corpus.records) art.evidence_store.emplace(r.evidence.id, r.evidence);
  art.validate();
  return art;
}

FactCheckResult verify(const PipelineArtifacts& artifacts, std::string_view claim_text,
                       const VerifyOptions& options) {
  if (is_blank(claim_text)) throw Error(ErrorCode::EmptyClaim, "claim text is blank");
  if (artifacts.index.empty()) {
    throw Error(ErrorCode::EmptyIndex, "no evidence has been indexed");
  }
  const InputMode mode = artifacts.config.input_mode;

  std::optional<Embedding> claim;
  try {
    claim = artifacts.encoder->encode(claim_text);
  } catch (const Error& e) {
    throw e.with_stage("encode");
  }

  const auto retrieve = [&] {
    try {
      return artifacts.index.search(*claim, 1).front();
    } catch (const Error& e) {
      throw e.with_stage("retrieve");
    }
  };

  std::optional<SearchHit> hit;
  if (mode == InputMode::ClaimEvidence) hit = retrieve();

  Prediction prediction;
  try {
    const std::vector<double> features = classifier_features(
        mode, *claim, artifacts.index, hit ? &*hit : nullptr, options.zero_evidence_features);
    prediction = options.predictor ? options.predictor(features, options.record)
                                   : predict(artifacts.params, features);
  } catch (const Error& e) {
    throw e.with_stage("classify");
  }

  if (!hit) hit = retrieve();
  const EvidenceDoc& evidence = artifacts.evidence_store.at(hit->evidence_id);

  VeracityLabel prompt_label = prediction.label;
  if (artifacts.config.prompt_label_source == PromptLabelSource::Gold && options.gold_label) {
    prompt_label = *options.gold_label;
  }

  FactCheckResult result;
  result.label = prediction.label;
  result.confidence = prediction.confidence;
  result.class_probabilities = prediction.probabilities;
  result.evidence_id = evidence.id;
  result.evidence_text = evidence.text;
  result.evidence_url = evidence.url;
  result.retrieval_distance = hit->distance;
  try {
    GenerationRequest request;
    request.prompt = build_prompt(claim_text, evidence.text, prompt_label);
    request.claim_text = std::string(claim_text);
    request.evidence_text = evidence.text;
    request.label = prompt_label;
    result.explanation = artifacts.generator->generate(request);
  } catch (const Error& e) {
    throw e.with_stage("generate");
  }
  result.rouge_l = rouge_l(result.explanation, evidence.text).f1;
  return result;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fingerprint(const PipelineArtifacts& artifacts, const SplitAssignment& split,
                        SplitName which) {
  nlohmann::ordered_json j;
  j["pipeline"] = to_json(artifacts.config);
  j["encoder"] = artifacts.encoder->name();
  j["generator"] = artifacts.generator->name();
  j["index_size"] = artifacts.index.size();
  j["split_seed"] = split.seed;
  j["split"] = std::string(render_split(which));
  j["hidden_width"] = artifacts.params.hidden;
  return hex64(fnv1a64(j.dump()));
}

}  // namespace

EvalReport evaluate(const PipelineArtifacts& artifacts, const Corpus& corpus,
                    const SplitAssignment& split, SplitName which,
                    const EvalOptions& options) {
  const auto records = split_records(corpus, split, which);
  if (records.empty()) {
    throw Error(ErrorCode::EmptySet,
                "split '" + std::string(render_split(which)) + "' has no records");
  }
  EvalReport report;
  report.split = std::string(render_split(which));
  report.n = records.size();

  std::vector<VeracityLabel> gold, pred;
  std::vector<std::string> explanations_with_gold, gold_explanations;
  double rouge_evidence_sum = 0.0, rouge_gold_sum = 0.0;

  for (const auto* r : records) {
    VerifyOptions vo;
    vo.gold_label = r->label;
    vo.record = r;
    vo.predictor = options.predictor;
    vo.zero_evidence_features = options.zero_evidence_features;
    FactCheckResult result;
    try {
      result = verify(artifacts, r->claim.text, vo);
    } catch (const Error& e) {
      throw e.with_stage("record " + r->claim.id);
    }
    gold.push_back(r->label);
    pred.push_back(result.label);
    ++report.confusion[label_code(r->label)][label_code(result.label)];
    rouge_evidence_sum += result.rouge_l;
    if (r->gold_explanation) {
      rouge_gold_sum += rouge_l(result.explanation, *r->gold_explanation).f1;
      explanations_with_gold.push_back(result.explanation);
      gold_explanations.push_back(*r->gold_explanation);
    }
  }

  report.accuracy = accuracy(gold, pred);
  const MacroF1 f1 = macro_f1(gold, pred);
  report.macro_f1 = f1.macro;
  report.per_class = f1.per_class;
  report.mean_rouge_l_evidence = rouge_evidence_sum / static_cast<double>(report.n);
  report.n_with_gold_explanation = gold_explanations.size();
  if (!gold_explanations.empty()) {
    report.mean_rouge_l_gold = rouge_gold_sum / static_cast<double>(gold_explanations.size());
    report.corpus_bleu_gold =
        corpus_bleu(explanations_with_gold, gold_explanations, options.bleu);
  }
  report.fingerprint = fingerprint(artifacts, split, which);
  return report;
}

EvalReport evaluate(const PipelineArtifacts& artifacts, const Corpus& corpus,
                    const SplitAssignment& split, std::string_view which,
                    const EvalOptions& options) {
  return evaluate(artifacts, corpus, split, parse_split(which), options);
}

nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["split"] = r.split;
  j["n"] = r.n;
  j["accuracy"] = r.accuracy;
  j["macro_f1"] = r.macro_f1;
  nlohmann::ordered_json per_class;
  for (VeracityLabel l : kAllLabels) {
    const ClassScores& s = r.per_class[label_code(l)];
    nlohmann::ordered_json row;
    row["precision"] = s.precision;
    row["recall"] = s.recall;
    row["f1"] = s.f1;
    row["support"] = s.support;
    per_class[std::string(render_label(l))] = std::move(row);
  }
  j["per_class"] = std::move(per_class);
  j["mean_rouge_l_evidence"] = r.mean_rouge_l_evidence;
  j["n_with_gold_explanation"] = r.n_with_gold_explanation;
  j["mean_rouge_l_gold"] =
      r.mean_rouge_l_gold ? nlohmann::ordered_json(*r.mean_rouge_l_gold) : nullptr;
  j["corpus_bleu_gold"] =
      r.corpus_bleu_gold ? nlohmann::ordered_json(*r.corpus_bleu_gold) : nullptr;
  j["label_order"] = nlohmann::ordered_json::array();
  for (VeracityLabel l : kAllLabels) j["label_order"].push_back(std::string(render_label(l)));
  j["confusion_matrix"] = r.confusion;
  j["fingerprint"] = r.fingerprint;
  return j;
}

EvalReport eval_report_from_json(const nlohmann::json& j) {
  try {
    EvalReport r;
    r.split = j.at("split").get<std::string>();
    r.n = j.at("n").get<std::size_t>();
    r.accuracy = j.at("accuracy").get<double>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    for (VeracityLabel l : kAllLabels) {
      const auto& row = j.at("per_class").at(std::string(render_label(l)));
      ClassScores& s = r.per_class[label_code(l)];
      s.precision = row.at("precision").get<double>();
      s.recall = row.at("recall").get<double>();
      s.f1 = row.at("f1").get<double>();
      s.support = row.at("support").get<std::size_t>();
    }
    r.mean_rouge_l_evidence = j.at("mean_rouge_l_evidence").get<double>();
    r.n_with_gold_explanation = j.at("n_with_gold_explanation").get<std::size_t>();
    if (!j.at("mean_rouge_l_gold").is_null()) {
      r.mean_rouge_l_gold = j.at("mean_rouge_l_gold").get<double>();
    }
    if (!j.at("corpus_bleu_gold").is_null()) {
      r.corpus_bleu_gold = j.at("corpus_bleu_gold").get<double>();
    }
    r.confusion = j.at("confusion_matrix")
                      .get<std::array<std::array<std::size_t, kNumLabels>, kNumLabels>>();
    r.fingerprint = j.at("fingerprint").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad report JSON: ") + e.what());
  }
}

AblationResult ablate_retrieval(const PipelineArtifacts& artifacts, const Corpus& corpus,
                                const SplitAssignment& split, SplitName which,
                                const EvalOptions& options) {
  if (artifacts.config.input_mode != InputMode::ClaimEvidence) {
    throw Error(ErrorCode::ModeMismatch,
                "retrieval ablation needs a classifier trained on claim+evidence input");
  }
  AblationResult out;
  EvalOptions with = options;
  with.zero_evidence_features = false;
  out.with_retrieval = evaluate(artifacts, corpus, split, which, with);
  EvalOptions without = options;
  without.zero_evidence_features = true;
  out.without_retrieval = evaluate(artifacts, corpus, split, which, without);
  out.accuracy_delta = out.with_retrieval.accuracy - out.without_retrieval.accuracy;
  return out;
}

nlohmann::ordered_json to_json(const AblationResult& result) {
  nlohmann::ordered_json j;
  j["with_retrieval"] = to_json(result.with_retrieval);
  j["without_retrieval"] = to_json(result.without_retrieval);
  j["accuracy_delta"] = result.accuracy_delta;
  return j;
}

std::string render_report_table(const std::vector<NamedReport>& rows) {
  const auto fmt = [](std::optional<double> v) {
    if (!v) return std::string("-");
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << *v;
    return os.str();
  };
  std::vector<std::array<std::string, 6>> cells;
  cells.push_back({"System", "N", "Accuracy", "Macro-F1", "ROUGE-L", "BLEU"});
  for (const auto& row : rows) {
    const EvalReport& r = *row.report;
    cells.push_back({row.system, std::to_string(r.n), fmt(r.accuracy), fmt(r.macro_f1),
                     fmt(r.mean_rouge_l_gold ? r.mean_rouge_l_gold
                                             : std::optional<double>(r.mean_rouge_l_evidence)),
                     fmt(r.corpus_bleu_gold)});
  }
  std::array<std::size_t, 6> width{};
  for (const auto& c : cells) {
    for (std::size_t k = 0; k < 6; ++k) width[k] = std::max(width[k], c[k].size());
  }
  std::ostringstream os;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t k = 0; k < 6; ++k) {
      if (k == 0) {
        os << std::left << std::setw(static_cast<int>(width[k])) << cells[r][k];
      } else {
        os << "  " << std::right << std::setw(static_cast<int>(width[k])) << cells[r][k];
      }
    }
    os << '\n';
    if (r == 0) {
      std::size_t total = width[0];
      for (std::size_t k = 1; k < 6; ++k) total += 2 + width[k];
      os << std::string(total, '-') << '\n';
    }
  }
  return os.str();
}

bool report_is_consistent(const EvalReport& report) {
  std::size_t total = 0;
  for (std::size_t g = 0; g < kNumLabels; ++g) {
    std::size_t row = 0;
    for (std::size_t p = 0; p < kNumLabels; ++p) row += report.confusion[g][p];
    if (row != report.per_class[g].support) return false;
    total += row;
  }
  return total == report.n;
}

}  // namespace hifact
