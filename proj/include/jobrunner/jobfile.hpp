#pragma once

#include "jobrunner/finding.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace jobrunner {

/// Parsed per-node Jobfile declaration.
///
/// All lists preserve declaration order and are duplicate-free. An absent key
/// parses to an empty list; `declares_archive` additionally remembers whether
/// the `archive` key was present at all (an empty-but-declared archive list is
/// how a node opts into owning a jobnode.archive directory).
struct JobfileSpec {
  std::vector<std::string> setup_scripts;
  std::vector<std::string> submit_scripts;
  std::vector<std::string> archive_patterns;
  bool declares_archive = false;

  bool empty() const {
    return setup_scripts.empty() && submit_scripts.empty() && archive_patterns.empty();
  }

  bool operator==(const JobfileSpec&) const = default;
};

/// Parses Jobfile text (block or single-line flow form).
/// Throws SyntaxError, UnknownKeyError, or InvalidEntryError.
JobfileSpec parse_jobfile(std::string_view text);

/// Canonical block-form serialization; parse_jobfile(serialize_jobfile(s)) == s.
std::string serialize_jobfile(const JobfileSpec& spec);

/// Checks that every declared script exists as a file in node_dir.
/// Archive patterns are not checked (matching zero files is legal).
std::vector<Finding> validate_spec(const JobfileSpec& spec,
                                   const std::filesystem::path& node_dir);

} // namespace jobrunner
