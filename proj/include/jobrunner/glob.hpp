#pragma once

#include <string_view>

namespace jobrunner {

/// Shell-style glob over a basename: `*` matches any run (including empty),
/// `?` one character, `[...]` a character class with optional leading `!`/`^`
/// negation and `a-z` ranges; `]` directly after the opening bracket is a
/// literal. Throws BadPatternError on an unterminated class.
bool glob_match(std::string_view pattern, std::string_view name);

/// Validates a pattern without matching. Throws BadPatternError.
void check_pattern(std::string_view pattern);

} // namespace jobrunner
