#include "jobrunner/glob.hpp"

#include "jobrunner/error.hpp"

namespace jobrunner {

namespace {

// Matches a character class starting at pattern[pos] (just past '[').
// On success sets end to the index past the closing ']'.
bool match_class(std::string_view pattern, std::size_t pos, char c, std::size_t& end) {
  bool negate = false;
  if (pos < pattern.size() && (pattern[pos] == '!' || pattern[pos] == '^')) {
    negate = true;
    ++pos;
  }
  bool matched = false;
  bool first = true;
  while (pos < pattern.size()) {
    char pc = pattern[pos];
    if (pc == ']' && !first) {
      end = pos + 1;
      return matched != negate;
    }
    first = false;
    if (pos + 2 < pattern.size() && pattern[pos + 1] == '-' && pattern[pos + 2] != ']') {
      char lo = pc, hi = pattern[pos + 2];
      if (c >= lo && c <= hi)
        matched = true;
      pos += 3;
    } else {
      if (c == pc)
        matched = true;
      ++pos;
    }
  }
  throw BadPatternError(std::string(pattern));
}

// Skips over a class for validation; returns index past ']'.
std::size_t skip_class(std::string_view pattern, std::size_t pos) {
  if (pos < pattern.size() && (pattern[pos] == '!' || pattern[pos] == '^'))
    ++pos;
  bool first = true;
  while (pos < pattern.size()) {
    if (pattern[pos] == ']' && !first)
      return pos + 1;
    first = false;
    ++pos;
  }
  throw BadPatternError(std::string(pattern));
}

} // namespace

void check_pattern(std::string_view pattern) {
  for (std::size_t i = 0; i < pattern.size(); ++i)
    if (pattern[i] == '[')
      i = skip_class(pattern, i + 1) - 1;
}

bool glob_match(std::string_view pattern, std::string_view name) {
  check_pattern(pattern);

  // Iterative match with single-star backtracking.
  std::size_t p = 0, n = 0;
  std::size_t star_p = std::string_view::npos, star_n = 0;
  while (n < name.size()) {
    if (p < pattern.size()) {
      char pc = pattern[p];
      if (pc == '*') {
        star_p = ++p;
        star_n = n;
        continue;
      }
      if (pc == '?') {
        ++p;
        ++n;
        continue;
      }
      if (pc == '[') {
        std::size_t end = 0;
        if (match_class(pattern, p + 1, name[n], end)) {
          p = end;
          ++n;
          continue;
        }
      } else if (pc == name[n]) {
        ++p;
        ++n;
        continue;
      }
    }
    if (star_p == std::string_view::npos)
      return false;
    p = star_p;
    n = ++star_n;
  }
  while (p < pattern.size() && pattern[p] == '*')
    ++p;
  return p == pattern.size();
}

} // namespace jobrunner
