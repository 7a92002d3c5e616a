#include "hifact/text.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "hifact/error.hpp"

extern const char* const kHifactEnglishWords;

namespace hifact {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes consumed
};

// Malformed sequences decode as U+FFFD consuming one byte.
CodePoint decode_utf8(std::string_view s, std::size_t pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(s[i]);
  };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) return {lead, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > s.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_unicode_whitespace(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 ||
         cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

bool is_ascii_punct(char c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
         (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
}

template <typename Fn>
void for_each_raw_token(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < text.size()) {
    const CodePoint cp = decode_utf8(text, pos);
    if (is_unicode_whitespace(cp.value)) {
      if (start != std::string_view::npos) {
        fn(text.substr(start, pos - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = pos;
    }
    pos += cp.length;
  }
  if (start != std::string_view::npos) fn(text.substr(start));
}

EnglishLexicon parse_lexicon(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    words.insert(line);
  }
  return EnglishLexicon(std::move(words));
}

}  // namespace

std::vector<std::string_view> split_raw(std::string_view text) {
  std::vector<std::string_view> out;
  for_each_raw_token(text, [&](std::string_view tok) { out.push_back(tok); });
  return out;
}

TokenList tokenize_whitespace(std::string_view text) {
  TokenList out;
  for_each_raw_token(text, [&](std::string_view tok) {
    std::size_t b = 0;
    std::size_t e = tok.size();
    while (b < e && is_ascii_punct(tok[b])) ++b;
    while (e > b && is_ascii_punct(tok[e - 1])) --e;
    if (b == e) return;
    std::string t(tok.substr(b, e - b));
    for (char& c : t) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    out.push_back(std::move(t));
  });
  return out;
}

bool contains_devanagari(std::string_view token) {
  for (std::size_t pos = 0; pos < token.size();) {
    const CodePoint cp = decode_utf8(token, pos);
    if ((cp.value >= 0x0900 && cp.value <= 0x097F) ||
        (cp.value >= 0xA8E0 && cp.value <= 0xA8FF)) {
      return true;
    }
    pos += cp.length;
  }
  return false;
}

bool is_latin_script(std::string_view token) {
  for (std::size_t pos = 0; pos < token.size();) {
    const CodePoint cp = decode_utf8(token, pos);
    if (cp.value > 0x024F) return false;
    pos += cp.length;
  }
  return true;
}

const EnglishLexicon& EnglishLexicon::builtin() {
  static const EnglishLexicon lexicon = [] {
    std::istringstream in{std::string(kHifactEnglishWords)};
    return parse_lexicon(in);
  }();
  return lexicon;
}

EnglishLexicon EnglishLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read lexicon '" + path + "'");
  return parse_lexicon(in);
}

bool is_english_token(std::string_view token, const EnglishLexicon& lexicon) {
  return !contains_devanagari(token) && is_latin_script(token) &&
         lexicon.contains(token);
}

double code_mix_ratio(const TokenList& tokens, const EnglishLexicon& lexicon) {
  if (tokens.empty()) return 0.0;
  std::size_t english = 0;
  for (const auto& t : tokens) {
    if (is_english_token(t, lexicon)) ++english;
  }
  return static_cast<double>(english) / static_cast<double>(tokens.size());
}

}  // namespace hifact
