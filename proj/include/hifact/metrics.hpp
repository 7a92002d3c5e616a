#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hifact/labels.hpp"
#include "hifact/text.hpp"

namespace hifact {

// Throws Error(EmptyInput) / Error(LengthMismatch).
double accuracy(std::span<const VeracityLabel> gold, std::span<const VeracityLabel> pred);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold count

  bool operator==(const ClassScores&) const = default;
};

struct MacroF1 {
  double macro = 0.0;  // mean over classes with gold support > 0
  std::array<ClassScores, kNumLabels> per_class{};
};

MacroF1 macro_f1(std::span<const VeracityLabel> gold, std::span<const VeracityLabel> pred);

// DP longest common subsequence; O(|a||b|) time, O(min(|a|,|b|)) space.
std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// ROUGE-L with beta = 1 over tokenize_whitespace tokens.
RougeScore rouge_l(std::string_view candidate, std::string_view reference);
RougeScore rouge_l_tokens(const TokenList& candidate, const TokenList& reference);

struct BleuConfig {
  std::size_t max_n = 4;
  double smoothing_epsilon = 0.0;  // 0 = unsmoothed
};

/// Sentence BLEU with uniform weights:
///   BP * exp(sum_n (1/N) ln p_n),  BP = 1 if c > r else exp(1 - r/c).
/// Unsmoothed, any p_n == 0 gives 0. With epsilon > 0, p_n becomes
/// max(p_n, epsilon / count_n), where count_n is the candidate n-gram count
/// (taken as 1 when the candidate has no n-grams of that order).
double bleu(std::string_view candidate, std::string_view reference,
            const BleuConfig& config = {});
double bleu_tokens(const TokenList& candidate, const TokenList& reference,
                   const BleuConfig& config = {});

/// Corpus BLEU: clipped matches and candidate n-gram counts summed over all
/// pairs, one brevity penalty from total candidate and reference lengths.
double corpus_bleu(std::span<const std::string> candidates,
                   std::span<const std::string> references, const BleuConfig& config = {});

}  // namespace hifact
