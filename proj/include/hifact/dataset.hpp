#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hifact/text.hpp"
#include "hifact/types.hpp"

namespace hifact {

struct Corpus {
  std::vector<AnnotatedClaim> records;
  std::string source_path;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  // nullptr when absent.
  const AnnotatedClaim* find(std::string_view id) const;
};

nlohmann::ordered_json record_to_json(const AnnotatedClaim& record);
// Throws Error(Parse) for missing/mistyped fields, Error(UnknownLabel) for labels.
AnnotatedClaim record_from_json(const nlohmann::json& j);

// Line-delimited JSON. Blank lines are skipped; line numbers in errors are 1-based.
Corpus load_corpus(const std::string& path);
Corpus parse_corpus(std::istream& in, std::string source_path = {});
void save_corpus(const Corpus& corpus, const std::string& path);
void write_corpus(const Corpus& corpus, std::ostream& out);

struct CorpusStats {
  std::size_t n_records = 0;
  double avg_claim_tokens = 0.0;
  double avg_evidence_tokens = 0.0;
  double claim_english_ratio = 0.0;
  double evidence_english_ratio = 0.0;
  std::array<std::size_t, kNumLabels> label_histogram{};
};

CorpusStats corpus_stats(const Corpus& corpus, const EnglishLexicon& lexicon);
nlohmann::ordered_json to_json(const CorpusStats& stats);

struct SplitRatios {
  double train = 0.7;
  double val = 0.1;
  double test = 0.2;

  // Finite, non-negative, summing to 1 within 1e-9; throws Error(BadRatios).
  void validate() const;
};

// Parses "0.7,0.1,0.2" and validates.
SplitRatios parse_ratios(std::string_view text);

enum class SplitName { Train, Val, Test };
std::string_view render_split(SplitName split);
// Accepts "train", "val"/"validation", "test"; throws Error(UnknownSplit).
SplitName parse_split(std::string_view text);

/// Ids within each list keep corpus order.
struct SplitAssignment {
  std::vector<std::string> train_ids;
  std::vector<std::string> val_ids;
  std::vector<std::string> test_ids;
  std::uint64_t seed = 0;
  SplitRatios ratios;

  const std::vector<std::string>& ids(SplitName split) const;
  std::size_t total() const {
    return train_ids.size() + val_ids.size() + test_ids.size();
  }
};

/// Per-label stratified split. Overall split sizes are the largest-remainder
/// apportionment of |corpus| x ratios; each label group then receives the
/// floor of its exact quota per split, and the leftover units are placed to
/// maximize the total fractional remainder subject to the overall sizes
/// (ties: earlier label, then train < val < test). Every cell is therefore
/// within one record of exact proportionality.
SplitAssignment stratified_split(const Corpus& corpus, const SplitRatios& ratios,
                                 std::uint64_t seed);

// Writes train.txt, val.txt, test.txt into `dir` (created if missing).
void save_split(const SplitAssignment& split, const std::string& dir);
// Throws Error(Validation) when ids are unknown, repeated, or missing.
SplitAssignment load_split(const std::string& dir, const Corpus& corpus);

// Records of one split in split-file order.
std::vector<const AnnotatedClaim*> split_records(const Corpus& corpus,
                                                 const SplitAssignment& split,
                                                 SplitName which);

// Largest-remainder apportionment of `total` over `weights`; ties go to the
// lower index. Weights need not be normalized.
std::vector<std::size_t> largest_remainder(std::size_t total,
                                           const std::vector<double>& weights);

struct FixtureOptions {
  std::size_t n = 1500;
  std::array<double, kNumLabels> label_weights{0.25, 0.25, 0.25, 0.25};
  double english_ratio_target = 0.55;
  std::uint64_t seed = 42;
};

Corpus generate_fixture(const FixtureOptions& options);

}  // namespace hifact
