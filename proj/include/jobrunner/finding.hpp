#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace jobrunner {

/// Non-fatal validation outcome attributed to a tree node.
struct Finding {
  enum class Kind { MissingScript, OrphanArchive, BadJobfile };

  Kind kind;
  std::filesystem::path node;
  std::string detail;
};

inline const char* to_string(Finding::Kind k) {
  switch (k) {
  case Finding::Kind::MissingScript:
    return "MissingScript";
  case Finding::Kind::OrphanArchive:
    return "OrphanArchive";
  case Finding::Kind::BadJobfile:
    return "BadJobfile";
  }
  return "?";
}

} // namespace jobrunner
