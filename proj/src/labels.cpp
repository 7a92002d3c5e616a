#include "hifact/labels.hpp"

#include <string>

#include "hifact/error.hpp"

namespace hifact {

namespace {

std::string ascii_lower_trimmed(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\r\n");
  std::string out(text.substr(begin, end - begin + 1));
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

struct Alias {
  std::string_view text;
  VeracityLabel label;
};

constexpr Alias kAliases[] = {
    {"true", VeracityLabel::True},
    {"false", VeracityLabel::False},
    {"partially_true", VeracityLabel::PartiallyTrue},
    {"partially true", VeracityLabel::PartiallyTrue},
    {"partly true", VeracityLabel::PartiallyTrue},
    {"unverified", VeracityLabel::Unverified},
};

}  // namespace

VeracityLabel label_from_code(int code) {
  if (code < 0 || code >= static_cast<int>(kNumLabels)) {
    throw Error(ErrorCode::InvalidArgument,
                "label code out of range: " + std::to_string(code));
  }
  return static_cast<VeracityLabel>(code);
}

std::string_view render_label(VeracityLabel label) {
  switch (label) {
    case VeracityLabel::True: return "true";
    case VeracityLabel::False: return "false";
    case VeracityLabel::PartiallyTrue: return "partially_true";
    case VeracityLabel::Unverified: return "unverified";
  }
  return "unverified";
}

VeracityLabel parse_label(std::string_view text) {
  const std::string key = ascii_lower_trimmed(text);
  for (const auto& alias : kAliases) {
    if (alias.text == key) return alias.label;
  }
  throw Error(ErrorCode::UnknownLabel, "unknown veracity label '" +
                                           std::string(text) + "'");
}

}  // namespace hifact
