#pragma once

#include "jobrunner/jobfile.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace jobrunner {

enum class Task { Setup, Submit };

inline const char* to_string(Task t) { return t == Task::Setup ? "setup" : "submit"; }

/// One directory on the root-to-target path, with its parsed Jobfile.
/// Nodes without a Jobfile carry an empty spec and are transparent.
struct TreeNode {
  std::filesystem::path path;
  JobfileSpec spec;
  bool has_jobfile = false;
};

struct NodeChain {
  std::filesystem::path root;
  std::vector<TreeNode> nodes; // root first, target last

  const TreeNode& target() const { return nodes.back(); }
  /// Target path relative to root; "." for the root itself.
  std::filesystem::path target_rel() const;
};

/// Glob pattern tagged with the node that declared it.
struct PatternOrigin {
  std::string pattern;
  std::filesystem::path node;

  bool operator==(const PatternOrigin&) const = default;
};

/// Resolves every directory from root down to target, parsing the Jobfile at
/// each node. Throws PathEscapeError, MissingNodeError, or JobfileError.
NodeChain resolve_chain(const std::filesystem::path& root,
                        const std::filesystem::path& target);

/// Concatenates, root first, each node's script list for the task, resolving
/// basenames against their own node directory. Throws MissingScriptError.
std::vector<std::filesystem::path> collect_scripts(const NodeChain& chain, Task task);

/// Concatenates, root first, each node's archive patterns with attribution.
std::vector<PatternOrigin> collect_patterns(const NodeChain& chain);

} // namespace jobrunner
