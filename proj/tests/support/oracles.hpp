#pragma once

// Independent, deliberately naive reference computations used to check the
// library. Nothing here calls into the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hifact::oracle {

// Longest common subsequence by enumerating every subsequence of the shorter
// list and testing it against the longer one. Exponential; keep inputs small.
inline std::size_t lcs_brute(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
  const auto& s = a.size() <= b.size() ? a : b;
  const auto& t = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  const std::uint32_t limit = 1u << s.size();
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    const auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
    if (bits <= best) continue;
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < s.size() && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      while (j < t.size() && t[j] != s[i]) ++j;
      if (j == t.size()) ok = false;
      else ++j;
    }
    if (ok) best = bits;
  }
  return best;
}

// Confusion-count macro-F1 over labels 0..3 with nonzero gold support.
inline double macro_f1_counts(const std::vector<int>& gold, const std::vector<int>& pred) {
  double sum = 0.0;
  int classes = 0;
  for (int c = 0; c < 4; ++c) {
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (gold[i] == c && pred[i] == c) ++tp;
      else if (gold[i] != c && pred[i] == c) ++fp;
      else if (gold[i] == c && pred[i] != c) ++fn;
    }
    if (tp + fn == 0) continue;
    ++classes;
    // F1 = 2TP / (2TP + FP + FN), which is 0 when TP == 0.
    sum += tp == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
  }
  return classes == 0 ? 0.0 : sum / classes;
}

// Sentence BLEU from explicit n-gram multisets, uniform weights, no smoothing.
inline double bleu_naive(const std::vector<std::string>& cand,
                         const std::vector<std::string>& ref, std::size_t max_n) {
  if (cand.empty()) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::map<std::vector<std::string>, int> cc, rc;
    for (std::size_t i = 0; i + n <= cand.size(); ++i)
      ++cc[{cand.begin() + i, cand.begin() + i + n}];
    for (std::size_t i = 0; i + n <= ref.size(); ++i)
      ++rc[{ref.begin() + i, ref.begin() + i + n}];
    int total = 0, clipped = 0;
    for (const auto& [g, c] : cc) {
      total += c;
      const auto it = rc.find(g);
      clipped += std::min(c, it == rc.end() ? 0 : it->second);
    }
    if (clipped == 0) return 0.0;
    log_sum += std::log(static_cast<double>(clipped) / total) / static_cast<double>(max_n);
  }
  const double c = static_cast<double>(cand.size());
  const double r = static_cast<double>(ref.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_sum);
}

// Full-scan k nearest neighbours; ties by insertion position.
inline std::vector<std::pair<std::size_t, double>> knn_scan(
    const std::vector<std::vector<float>>& rows, const std::vector<double>& q, std::size_t k) {
  std::vector<std::pair<std::size_t, double>> all;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double diff = q[j] - static_cast<double>(rows[i][j]);
      d += diff * diff;
    }
    all.emplace_back(i, d);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& x, const auto& y) { return x.second < y.second; });
  all.resize(std::min(k, all.size()));
  return all;
}

}  // namespace hifact::oracle
