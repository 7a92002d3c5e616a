#include "hifact/metrics.hpp"

#include <cmath>
#include <map>

#include "hifact/error.hpp"

namespace hifact {

namespace {

void check_pair(std::span<const VeracityLabel> gold, std::span<const VeracityLabel> pred) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(gold.size()) + " gold vs " + std::to_string(pred.size()) +
                    " predicted labels");
  }
  if (gold.empty()) throw Error(ErrorCode::EmptyInput, "no labels to score");
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const TokenList& tokens, std::size_t n) {
  NgramCounts out;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return out;
}

// Clipped matches and candidate total for one order.
std::pair<std::size_t, std::size_t> clipped(const TokenList& cand, const TokenList& ref,
                                            std::size_t n) {
  const NgramCounts c = ngrams(cand, n);
  const NgramCounts r = ngrams(ref, n);
  std::size_t matches = 0, total = 0;
  for (const auto& [gram, count] : c) {
    total += count;
    const auto it = r.find(gram);
    if (it != r.end()) matches += std::min(count, it->second);
  }
  return {matches, total};
}

double combine(const std::vector<std::size_t>& matches, const std::vector<std::size_t>& totals,
               std::size_t cand_len, std::size_t ref_len, const BleuConfig& config) {
  if (cand_len == 0) return 0.0;
  double log_sum = 0.0;
  const double weight = 1.0 / static_cast<double>(config.max_n);
  for (std::size_t k = 0; k < config.max_n; ++k) {
    double p = totals[k] > 0 ? static_cast<double>(matches[k]) / totals[k] : 0.0;
    if (config.smoothing_epsilon > 0.0) {
      const double denom = totals[k] > 0 ? static_cast<double>(totals[k]) : 1.0;
      p = std::max(p, config.smoothing_epsilon / denom);
    }
    if (p == 0.0) return 0.0;
    log_sum += weight * std::log(p);
  }
  const double c = static_cast<double>(cand_len);
  const double r = static_cast<double>(ref_len);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum);
}

void check_bleu_config(const BleuConfig& config) {
  if (config.max_n < 1) throw Error(ErrorCode::InvalidArgument, "BLEU max_n must be >= 1");
  if (!(config.smoothing_epsilon >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "smoothing_epsilon must be >= 0");
  }
}

}  // namespace

double accuracy(std::span<const VeracityLabel> gold, std::span<const VeracityLabel> pred) {
  check_pair(gold, pred);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += gold[i] == pred[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

MacroF1 macro_f1(std::span<const VeracityLabel> gold, std::span<const VeracityLabel> pred) {
  check_pair(gold, pred);
  std::array<std::size_t, kNumLabels> tp{}, fp{}, fn{};
  MacroF1 out;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto g = static_cast<std::size_t>(label_code(gold[i]));
    const auto p = static_cast<std::size_t>(label_code(pred[i]));
    ++out.per_class[g].support;
    if (g == p) {
      ++tp[g];
    } else {
      ++fp[p];
      ++fn[g];
    }
  }
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    auto& s = out.per_class[c];
    s.precision = tp[c] + fp[c] ? static_cast<double>(tp[c]) / (tp[c] + fp[c]) : 0.0;
    s.recall = tp[c] + fn[c] ? static_cast<double>(tp[c]) / (tp[c] + fn[c]) : 0.0;
    s.f1 = harmonic(s.precision, s.recall);
    if (s.support > 0) {
      sum += s.f1;
      ++present;
    }
  }
  out.macro = present ? sum / static_cast<double>(present) : 0.0;
  return out;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Row over the shorter sequence.
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;  // row[j-1] from the previous i
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

RougeScore rouge_l_tokens(const TokenList& candidate, const TokenList& reference) {
  const double l = static_cast<double>(lcs_length(candidate, reference));
  RougeScore s;
  s.precision = candidate.empty() ? 0.0 : l / static_cast<double>(candidate.size());
  s.recall = reference.empty() ? 0.0 : l / static_cast<double>(reference.size());
  s.f1 = harmonic(s.precision, s.recall);
  return s;
}

RougeScore rouge_l(std::string_view candidate, std::string_view reference) {
  return rouge_l_tokens(tokenize_whitespace(candidate), tokenize_whitespace(reference));
}

double bleu_tokens(const TokenList& candidate, const TokenList& reference,
                   const BleuConfig& config) {
  check_bleu_config(config);
  std::vector<std::size_t> matches(config.max_n), totals(config.max_n);
  for (std::size_t n = 1; n <= config.max_n; ++n) {
    std::tie(matches[n - 1], totals[n - 1]) = clipped(candidate, reference, n);
  }
  return combine(matches, totals, candidate.size(), reference.size(), config);
}

double bleu(std::string_view candidate, std::string_view reference,
            const BleuConfig& config) {
  return bleu_tokens(tokenize_whitespace(candidate), tokenize_whitespace(reference), config);
}

double corpus_bleu(std::span<const std::string> candidates,
                   std::span<const std::string> references, const BleuConfig& config) {
  check_bleu_config(config);
  if (candidates.size() != references.size()) {
    throw Error(ErrorCode::LengthMismatch, "candidate and reference counts differ");
  }
  std::vector<std::size_t> matches(config.max_n, 0), totals(config.max_n, 0);
  std::size_t cand_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const TokenList c = tokenize_whitespace(candidates[i]);
    const TokenList r = tokenize_whitespace(references[i]);
    cand_len += c.size();
    ref_len += r.size();
    for (std::size_t n = 1; n <= config.max_n; ++n) {
      const auto [m, t] = clipped(c, r, n);
      matches[n - 1] += m;
      totals[n - 1] += t;
    }
  }
  return combine(matches, totals, cand_len, ref_len, config);
}

}  // namespace hifact
