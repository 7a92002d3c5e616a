#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace hifact {

// Integer codes are part of the checkpoint and report formats; do not reorder.
enum class VeracityLabel : int {
  True = 0,
  False = 1,
  PartiallyTrue = 2,
  Unverified = 3,
};

inline constexpr std::size_t kNumLabels = 4;

inline constexpr std::array<VeracityLabel, kNumLabels> kAllLabels = {
    VeracityLabel::True, VeracityLabel::False, VeracityLabel::PartiallyTrue,
    VeracityLabel::Unverified};

constexpr int label_code(VeracityLabel label) { return static_cast<int>(label); }

// Throws Error(InvalidArgument) for codes outside 0..3.
VeracityLabel label_from_code(int code);

// Canonical lowercase wire form: "true", "false", "partially_true", "unverified".
std::string_view render_label(VeracityLabel label);

// Case-insensitive; accepts canonical forms plus "partially true" and
// "partly true". Anything else (including "partially false") throws
// Error(UnknownLabel).
VeracityLabel parse_label(std::string_view text);

}  // namespace hifact
