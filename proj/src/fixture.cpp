#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hifact/dataset.hpp"
#include "hifact/error.hpp"
#include "hifact/rng.hpp"

namespace hifact {

namespace {

// Every entry must be in the builtin English lexicon (checked by tests).
constexpr const char* kEnglishWords[] = {
    "government", "development", "schools",  "roads",     "farmers",
    "jobs",       "hospitals",   "budget",   "water",     "electricity",
    "percent",    "million",     "state",    "people",    "villages",
    "women",      "youth",       "health",   "education", "police",
    "power",      "project",     "scheme",   "crime",     "growth",
    "income",     "support",     "free",     "new",       "every",
    "district",   "families",    "students", "workers",   "industry",
    "investment", "tax",         "loan",     "bank",      "houses",
    "built",      "increased",   "reduced",  "started",   "given",
    "doubled",    "record",      "highest",  "first",     "years",
};

constexpr const char* kHindiWords[] = {
    "sarkar",  "vikas",   "kisan",   "garib",  "naujawan", "rozgar",
    "sadak",   "bijli",   "paani",   "yojana", "pradesh",  "janta",
    "humne",   "kiya",    "hai",     "ne",     "ki",       "ka",
    "ke",      "mein",    "diya",    "banaya", "lakh",     "saal",
    "pichle",  "naye",    "sabhi",   "har",    "gaon",     "shehar",
    "mahila",  "yuva",    "shiksha", "swasthya", "karod",  "pehli",
    "baar",    "aaj",     "hamari",  "unki",   "kaam",     "zyada",
    "kam",     "badha",   "ghata",   "sabse",  "liye",     "tak",
};

// Filler vocabulary used only in evidence text, disjoint from claim words.
constexpr const char* kEvidenceFiller[] = {
    "according", "report",    "published", "ministry",  "statistics",
    "survey",    "official",  "data",      "audit",     "department",
    "figures",   "released",  "annual",    "review",    "committee",
    "analysis",  "documents", "census",    "press",     "statement",
    "rajya",     "vibhag",    "aankde",    "prakashit", "sarvekshan",
    "adhikari",  "baithak",   "riport",    "jaanch",    "suchna",
};

// Label-specific closing phrases carry the veracity signal in the evidence.
constexpr const char* kMarkers[kNumLabels] = {
    "official records confirm this figure",
    "official records contradict this claim",
    "records show only part of this is accurate",
    "no official record could be found",
};

constexpr const char* kStates[] = {
    "Andhra Pradesh", "Arunachal Pradesh", "Assam",       "Bihar",
    "Chhattisgarh",   "Goa",               "Gujarat",     "Haryana",
    "Himachal Pradesh", "Jharkhand",       "Karnataka",   "Kerala",
    "Madhya Pradesh", "Maharashtra",       "Manipur",     "Meghalaya",
    "Mizoram",        "Nagaland",          "Odisha",      "Punjab",
    "Rajasthan",      "Sikkim",            "Tamil Nadu",  "Telangana",
    "Tripura",        "Uttar Pradesh",     "Uttarakhand", "West Bengal",
};

template <typename T, std::size_t N>
const char* pick(SplitMix64& rng, const T (&arr)[N]) {
  return arr[rng.below(N)];
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string explanation_for(VeracityLabel label) {
  switch (label) {
    case VeracityLabel::True:
      return "The claim is true because official records confirm this figure.";
    case VeracityLabel::False:
      return "The claim is false because official records contradict this claim.";
    case VeracityLabel::PartiallyTrue:
      return "The claim is partially true because records show only part of this is accurate.";
    case VeracityLabel::Unverified:
      return "The claim is unverified because no official record could be found.";
  }
  return {};
}

}  // namespace

Corpus generate_fixture(const FixtureOptions& options) {
  if (options.n < 1) throw Error(ErrorCode::BadWeights, "fixture size must be >= 1");
  double weight_sum = 0.0;
  for (double w : options.label_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::BadWeights, "label weights must be finite and non-negative");
    }
    weight_sum += w;
  }
  if (weight_sum <= 0.0) throw Error(ErrorCode::BadWeights, "label weights are all zero");
  if (!(options.english_ratio_target >= 0.0 && options.english_ratio_target <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "english_ratio_target must lie in [0,1]");
  }

  const std::vector<std::size_t> counts = largest_remainder(
      options.n, {options.label_weights.begin(), options.label_weights.end()});
  std::vector<VeracityLabel> labels;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    labels.insert(labels.end(), counts[l], kAllLabels[l]);
  }
  SplitMix64 rng(options.seed);
  rng.shuffle(std::span<VeracityLabel>(labels));

  const auto draw_word = [&] {
    return std::string(rng.uniform01() < options.english_ratio_target
                           ? pick(rng, kEnglishWords)
                           : pick(rng, kHindiWords));
  };

  Corpus corpus;
  corpus.source_path = "<fixture>";
  corpus.records.reserve(options.n);
  for (std::size_t i = 0; i < options.n; ++i) {
    const VeracityLabel label = labels[i];
    char id_buf[32];

    AnnotatedClaim rec;
    std::snprintf(id_buf, sizeof id_buf, "c%05zu", i + 1);
    rec.claim.id = id_buf;
    rec.claim.state = pick(rng, kStates);
    rec.claim.speaker = "Chief Minister of " + rec.claim.state;
    std::snprintf(id_buf, sizeof id_buf, "2023-%02d-%02d",
                  static_cast<int>(1 + rng.below(12)),
                  static_cast<int>(1 + rng.below(28)));
    rec.claim.date = id_buf;

    // 11..17 content words plus a number: 12..18 tokens, mean ~15.
    const std::size_t n_words = 11 + rng.below(7);
    std::vector<std::string> claim_words;
    for (std::size_t k = 0; k < n_words; ++k) claim_words.push_back(draw_word());
    claim_words.insert(claim_words.begin() + rng.below(n_words + 1),
                       std::to_string(10 + rng.below(990)));
    rec.claim.text = join(claim_words);

    std::vector<std::string> overlap;
    switch (label) {
      case VeracityLabel::True:
      case VeracityLabel::False:
        overlap = claim_words;
        break;
      case VeracityLabel::PartiallyTrue:
        overlap.assign(claim_words.begin(),
                       claim_words.begin() + claim_words.size() / 2);
        break;
      case VeracityLabel::Unverified:
        break;
    }
    std::vector<std::string> evidence_words;
    const std::size_t n_filler = 12 + rng.below(8) +
                                 (claim_words.size() - overlap.size());
    for (std::size_t k = 0; k < n_filler; ++k) {
      evidence_words.emplace_back(pick(rng, kEvidenceFiller));
    }
    evidence_words.insert(evidence_words.begin() + rng.below(evidence_words.size() + 1),
                          overlap.begin(), overlap.end());
    std::snprintf(id_buf, sizeof id_buf, "e%05zu", i + 1);
    rec.evidence.id = id_buf;
    rec.evidence.text = join(evidence_words) + ", " + kMarkers[label_code(label)] + ".";
    rec.evidence.url = "https://factcheck.example.org/evidence/" + rec.evidence.id;
    rec.label = label;
    // Every fifth record omits the optional gold explanation.
    if (i % 5 != 4) rec.gold_explanation = explanation_for(label);
    corpus.records.push_back(std::move(rec));
  }
  return corpus;
}

}  // namespace hifact
