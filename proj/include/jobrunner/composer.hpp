#pragma once

#include "jobrunner/tree.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace jobrunner {

struct ScriptSection {
  std::filesystem::path source;   // absolute path of the source script
  std::string source_rel;         // root-relative form used in the banner
  std::string sha256;             // digest of the exact file bytes
  std::string body;               // verbatim content
};

/// Deterministic stitched script for one task at one node. `rendered` is a
/// pure function of (task, target relative path, sections): no timestamps,
/// hostnames, or absolute paths appear in it.
struct CompositeScript {
  Task task;
  std::filesystem::path target_node; // absolute execution directory
  std::filesystem::path root;
  std::string target_rel;
  std::vector<ScriptSection> sections;
  std::string rendered;

  std::filesystem::path composite_path() const {
    return target_node / (std::string("job.") + to_string(task));
  }
};

/// Stitches scripts in the given order. Scheduler directive lines (#SBATCH,
/// #PBS) are hoisted to just after the header, preserving relative order.
CompositeScript compose(const std::vector<std::filesystem::path>& scripts, Task task,
                        const std::filesystem::path& target_node,
                        const std::filesystem::path& root);

/// Writes `rendered` to <target_node>/job.<task> with executable permission,
/// overwriting any previous composite. Returns the path.
std::filesystem::path write_composite(const CompositeScript& composite);

} // namespace jobrunner
