#pragma once

#include <iosfwd>

namespace hifact {

// Exit codes: 0 ok, 1 usage, 2 data/validation, 3 runtime/upstream.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hifact
