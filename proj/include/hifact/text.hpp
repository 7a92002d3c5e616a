#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace hifact {

using TokenList = std::vector<std::string>;

// Lowercases (ASCII), splits on Unicode White_Space, strips leading and
// trailing ASCII punctuation from each token and drops empty tokens.
TokenList tokenize_whitespace(std::string_view text);

// Whitespace split without any normalization; tokens keep their original bytes.
std::vector<std::string_view> split_raw(std::string_view text);

bool contains_devanagari(std::string_view token);

// True when every code point is ASCII or in the Latin-1 / Latin Extended
// blocks (U+0000..U+024F).
bool is_latin_script(std::string_view token);

class EnglishLexicon {
 public:
  EnglishLexicon() = default;
  explicit EnglishLexicon(std::unordered_set<std::string> words)
      : words_(std::move(words)) {}

  // The ~5,000-word frequency list compiled into the library.
  static const EnglishLexicon& builtin();
  // One word per line; blank lines and lines starting with '#' are skipped.
  static EnglishLexicon load(const std::string& path);

  bool contains(std::string_view word) const {
    return words_.count(std::string(word)) != 0;
  }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

bool is_english_token(std::string_view token, const EnglishLexicon& lexicon);

// Share of tokens that are English; 0 for an empty list.
double code_mix_ratio(const TokenList& tokens, const EnglishLexicon& lexicon);

}  // namespace hifact
