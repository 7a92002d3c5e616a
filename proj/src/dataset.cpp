#include "hifact/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "hifact/error.hpp"
#include "hifact/rng.hpp"

namespace hifact {

namespace fs = std::filesystem;

const AnnotatedClaim* Corpus::find(std::string_view id) const {
  for (const auto& r : records) {
    if (r.claim.id == id) return &r;
  }
  return nullptr;
}

nlohmann::ordered_json record_to_json(const AnnotatedClaim& record) {
  nlohmann::ordered_json j;
  j["id"] = record.claim.id;
  j["claim_text"] = record.claim.text;
  j["speaker"] = record.claim.speaker;
  j["state"] = record.claim.state;
  j["date"] = record.claim.date;
  j["evidence_id"] = record.evidence.id;
  j["evidence_text"] = record.evidence.text;
  j["evidence_url"] = record.evidence.url;
  j["label"] = std::string(render_label(record.label));
  if (record.gold_explanation) {
    j["gold_explanation"] = *record.gold_explanation;
  } else {
    j["gold_explanation"] = nullptr;
  }
  return j;
}

namespace {

std::string required_string(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
  }
  if (!it->is_string()) {
    throw Error(ErrorCode::Parse, std::string("field '") + key +
                                      "' must be a string");
  }
  return it->get<std::string>();
}

// Optional string fields: absent or null read as empty.
std::string optional_string(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw Error(ErrorCode::Parse, std::string("field '") + key +
                                      "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

AnnotatedClaim record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "record is not an object");
  AnnotatedClaim r;
  r.claim.id = required_string(j, "id");
  r.claim.text = required_string(j, "claim_text");
  r.claim.speaker = optional_string(j, "speaker");
  r.claim.state = optional_string(j, "state");
  r.claim.date = optional_string(j, "date");
  r.evidence.id = required_string(j, "evidence_id");
  r.evidence.text = required_string(j, "evidence_text");
  r.evidence.url = optional_string(j, "evidence_url");
  r.label = parse_label(required_string(j, "label"));
  const auto gold = j.find("gold_explanation");
  if (gold != j.end() && !gold->is_null()) {
    if (!gold->is_string()) {
      throw Error(ErrorCode::Parse, "field 'gold_explanation' must be a string or null");
    }
    r.gold_explanation = gold->get<std::string>();
  }
  return r;
}

Corpus parse_corpus(std::istream& in, std::string source_path) {
  Corpus corpus;
  corpus.source_path = std::move(source_path);
  std::unordered_set<std::string> seen;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse, where + e.what(), line_no);
    }
    AnnotatedClaim record;
    try {
      record = record_from_json(parsed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnknownLabel) {
        throw Error(ErrorCode::Parse, where + e.what(), line_no);
      }
      throw Error(ErrorCode::Validation,
                  "record '" + parsed.value("id", std::string()) + "' (" + where +
                      e.what() + ")",
                  line_no);
    }
    validate_record(record);
    if (!seen.insert(record.claim.id).second) {
      throw Error(ErrorCode::Validation,
                  "duplicate record id '" + record.claim.id + "'");
    }
    corpus.records.push_back(std::move(record));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read corpus '" + path + "'");
  return parse_corpus(in, path);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& r : corpus.records) out << record_to_json(r).dump() << '\n';
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write corpus '" + path + "'");
  write_corpus(corpus, out);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

CorpusStats corpus_stats(const Corpus& corpus, const EnglishLexicon& lexicon) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no records");
  CorpusStats stats;
  stats.n_records = corpus.size();
  std::size_t claim_tokens = 0, evidence_tokens = 0;
  std::size_t claim_english = 0, evidence_english = 0;
  for (const auto& r : corpus.records) {
    const TokenList ct = tokenize_whitespace(r.claim.text);
    const TokenList et = tokenize_whitespace(r.evidence.text);
    claim_tokens += ct.size();
    evidence_tokens += et.size();
    for (const auto& t : ct) claim_english += is_english_token(t, lexicon) ? 1 : 0;
    for (const auto& t : et) evidence_english += is_english_token(t, lexicon) ? 1 : 0;
    ++stats.label_histogram[label_code(r.label)];
  }
  const double n = static_cast<double>(stats.n_records);
  stats.avg_claim_tokens = static_cast<double>(claim_tokens) / n;
  stats.avg_evidence_tokens = static_cast<double>(evidence_tokens) / n;
  stats.claim_english_ratio =
      claim_tokens ? static_cast<double>(claim_english) / claim_tokens : 0.0;
  stats.evidence_english_ratio =
      evidence_tokens ? static_cast<double>(evidence_english) / evidence_tokens
                      : 0.0;
  return stats;
}

nlohmann::ordered_json to_json(const CorpusStats& stats) {
  nlohmann::ordered_json j;
  j["n_records"] = stats.n_records;
  j["avg_claim_tokens"] = stats.avg_claim_tokens;
  j["avg_evidence_tokens"] = stats.avg_evidence_tokens;
  j["claim_english_ratio"] = stats.claim_english_ratio;
  j["evidence_english_ratio"] = stats.evidence_english_ratio;
  nlohmann::ordered_json hist;
  for (VeracityLabel l : kAllLabels) {
    hist[std::string(render_label(l))] = stats.label_histogram[label_code(l)];
  }
  j["label_histogram"] = std::move(hist);
  return j;
}

void SplitRatios::validate() const {
  for (double p : {train, val, test}) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorCode::BadRatios, "ratios must be finite and non-negative");
    }
  }
  if (std::abs(train + val + test - 1.0) > 1e-9) {
    throw Error(ErrorCode::BadRatios, "ratios must sum to 1");
  }
}

SplitRatios parse_ratios(std::string_view text) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string piece(text.substr(
        start, comma == std::string_view::npos ? text.size() - start : comma - start));
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadRatios, "cannot parse ratio '" + piece + "'");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 3) {
    throw Error(ErrorCode::BadRatios, "expected three comma-separated ratios");
  }
  const SplitRatios r{parts[0], parts[1], parts[2]};
  r.validate();
  return r;
}

std::string_view render_split(SplitName split) {
  switch (split) {
    case SplitName::Train: return "train";
    case SplitName::Val: return "val";
    case SplitName::Test: return "test";
  }
  return "test";
}

SplitName parse_split(std::string_view text) {
  if (text == "train") return SplitName::Train;
  if (text == "val" || text == "validation") return SplitName::Val;
  if (text == "test") return SplitName::Test;
  throw Error(ErrorCode::UnknownSplit, "unknown split '" + std::string(text) + "'");
}

const std::vector<std::string>& SplitAssignment::ids(SplitName split) const {
  switch (split) {
    case SplitName::Train: return train_ids;
    case SplitName::Val: return val_ids;
    case SplitName::Test: return test_ids;
  }
  return test_ids;
}

std::vector<std::size_t> largest_remainder(std::size_t total,
                                           const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> counts(weights.size(), 0);
  if (weights.empty() || sum <= 0.0) return counts;
  std::vector<double> frac(weights.size(), 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = static_cast<double>(total) * weights[i] / sum;
    // Absorb representation error so 0.7 * 1500 counts as exactly 1050.
    const double base = std::floor(quota + 1e-9);
    counts[i] = static_cast<std::size_t>(base);
    frac[i] = std::max(0.0, quota - base);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size()) {
    ++counts[order[k]];
    ++assigned;
  }
  return counts;
}

namespace {

constexpr std::size_t kNumSplits = 3;

// Row l, column s: how many records of label group l go to split s.
using CountTable = std::vector<std::array<std::size_t, kNumSplits>>;

CountTable apportion_groups(const std::vector<std::size_t>& group_sizes,
                            const std::array<double, kNumSplits>& ratios,
                            const std::vector<std::size_t>& split_totals) {
  const std::size_t rows = group_sizes.size();
  CountTable base(rows);
  std::vector<std::array<double, kNumSplits>> frac(rows);
  std::vector<std::size_t> row_left(rows, 0);
  std::array<std::size_t, kNumSplits> col_used{};
  for (std::size_t l = 0; l < rows; ++l) {
    std::size_t used = 0;
    for (std::size_t s = 0; s < kNumSplits; ++s) {
      const double quota = static_cast<double>(group_sizes[l]) * ratios[s];
      const double b = std::floor(quota + 1e-9);
      base[l][s] = static_cast<std::size_t>(b);
      frac[l][s] = std::max(0.0, quota - b);
      used += base[l][s];
      col_used[s] += base[l][s];
    }
    row_left[l] = group_sizes[l] - used;
  }
  std::array<std::size_t, kNumSplits> col_left{};
  for (std::size_t s = 0; s < kNumSplits; ++s) col_left[s] = split_totals[s] - col_used[s];

  // Each row places row_left[l] (< 3) extra units on distinct splits. With at
  // most 4 label groups there are at most 3^4 combinations, so enumerate.
  std::vector<std::vector<std::array<bool, kNumSplits>>> choices(rows);
  for (std::size_t l = 0; l < rows; ++l) {
    for (unsigned mask = 0; mask < (1u << kNumSplits); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != row_left[l]) continue;
      std::array<bool, kNumSplits> pick{};
      for (std::size_t s = 0; s < kNumSplits; ++s) pick[s] = (mask >> s) & 1u;
      choices[l].push_back(pick);
    }
    // Lexicographically largest first: earlier splits preferred on ties.
    std::sort(choices[l].begin(), choices[l].end(), std::greater<>());
  }

  std::vector<std::size_t> current(rows, 0), best;
  double best_score = -1.0;
  const auto evaluate = [&] {
    std::array<std::size_t, kNumSplits> cols{};
    double score = 0.0;
    for (std::size_t l = 0; l < rows; ++l) {
      const auto& pick = choices[l][current[l]];
      for (std::size_t s = 0; s < kNumSplits; ++s) {
        if (pick[s]) {
          ++cols[s];
          score += frac[l][s];
        }
      }
    }
    if (cols != col_left) return;
    if (score > best_score + 1e-12) {
      best_score = score;
      best = current;
    }
  };
  for (std::size_t l = 0; l < rows; ++l) {
    if (choices[l].empty()) throw std::logic_error("apportion: no row choice");
  }
  // Odometer with the last row fastest, so ties keep the first combination
  // in lexicographic order of (row 0 choice, row 1 choice, ...).
  for (;;) {
    evaluate();
    std::size_t l = rows;
    while (l > 0 && ++current[l - 1] == choices[l - 1].size()) {
      current[l - 1] = 0;
      --l;
    }
    if (l == 0) break;
  }
  if (best.empty() && rows > 0) {
    throw std::logic_error("apportion: no feasible stratified assignment");
  }
  for (std::size_t l = 0; l < rows; ++l) {
    const auto& pick = choices[l][best[l]];
    for (std::size_t s = 0; s < kNumSplits; ++s) base[l][s] += pick[s] ? 1 : 0;
  }
  return base;
}

}  // namespace

SplitAssignment stratified_split(const Corpus& corpus, const SplitRatios& ratios,
                                 std::uint64_t seed) {
  ratios.validate();
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no records");

  const std::array<double, kNumSplits> r = {ratios.train, ratios.val, ratios.test};
  const std::vector<std::size_t> totals =
      largest_remainder(corpus.size(), {r.begin(), r.end()});

  std::vector<std::vector<std::size_t>> groups;
  for (VeracityLabel label : kAllLabels) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus.records[i].label == label) members.push_back(i);
    }
    if (!members.empty()) groups.push_back(std::move(members));
  }
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) sizes.push_back(g.size());
  const CountTable table = apportion_groups(sizes, r, totals);

  SplitMix64 rng(seed);
  std::vector<int> assignment(corpus.size(), -1);
  for (std::size_t l = 0; l < groups.size(); ++l) {
    auto& members = groups[l];
    rng.shuffle(std::span<std::size_t>(members));
    std::size_t pos = 0;
    for (std::size_t s = 0; s < kNumSplits; ++s) {
      for (std::size_t k = 0; k < table[l][s]; ++k) {
        assignment[members[pos++]] = static_cast<int>(s);
      }
    }
  }

  SplitAssignment out;
  out.seed = seed;
  out.ratios = ratios;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::string& id = corpus.records[i].claim.id;
    switch (assignment[i]) {
      case 0: out.train_ids.push_back(id); break;
      case 1: out.val_ids.push_back(id); break;
      default: out.test_ids.push_back(id); break;
    }
  }
  return out;
}

void save_split(const SplitAssignment& split, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir + "': " + ec.message());
  for (SplitName name : {SplitName::Train, SplitName::Val, SplitName::Test}) {
    const fs::path path = fs::path(dir) / (std::string(render_split(name)) + ".txt");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    for (const auto& id : split.ids(name)) out << id << '\n';
  }
}

SplitAssignment load_split(const std::string& dir, const Corpus& corpus) {
  SplitAssignment split;
  std::unordered_set<std::string> known;
  for (const auto& r : corpus.records) known.insert(r.claim.id);
  std::unordered_set<std::string> seen;
  for (SplitName name : {SplitName::Train, SplitName::Val, SplitName::Test}) {
    const fs::path path = fs::path(dir) / (std::string(render_split(name)) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
    auto& ids = name == SplitName::Train ? split.train_ids
                : name == SplitName::Val ? split.val_ids
                                         : split.test_ids;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (!known.count(line)) {
        throw Error(ErrorCode::Validation, "split id '" + line + "' not in corpus");
      }
      if (!seen.insert(line).second) {
        throw Error(ErrorCode::Validation, "split id '" + line + "' repeated");
      }
      ids.push_back(line);
    }
  }
  if (seen.size() != known.size()) {
    throw Error(ErrorCode::Validation, "split files do not cover the corpus");
  }
  const double n = static_cast<double>(corpus.size());
  if (n > 0) {
    split.ratios = {split.train_ids.size() / n, split.val_ids.size() / n,
                    split.test_ids.size() / n};
  }
  return split;
}

std::vector<const AnnotatedClaim*> split_records(const Corpus& corpus,
                                                 const SplitAssignment& split,
                                                 SplitName which) {
  std::unordered_map<std::string_view, const AnnotatedClaim*> by_id;
  for (const auto& r : corpus.records) by_id.emplace(r.claim.id, &r);
  std::vector<const AnnotatedClaim*> out;
  for (const auto& id : split.ids(which)) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::Validation, "split id '" + id + "' not in corpus");
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace hifact
