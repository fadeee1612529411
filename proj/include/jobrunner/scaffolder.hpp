#pragma once

#include "jobrunner/finding.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace jobrunner {

/// Seeds a new experiment tree: per-software and per-simulation nodes with
/// stub scripts and Jobfiles, a root environment.sh + Jobfile, and markdown
/// stubs for the human-authored notebook sections. Deterministic given its
/// arguments. Throws NonEmptyRootError when root already has content.
std::vector<std::filesystem::path> init_tree(const std::filesystem::path& root,
                                             const std::string& experiment_name,
                                             const std::vector<std::string>& software,
                                             const std::vector<std::string>& simulations);

/// Parses every Jobfile in the tree, checks declared scripts exist, and flags
/// jobnode.archive directories in nodes that never declare an archive key.
std::vector<Finding> verify_tree(const std::filesystem::path& root);

} // namespace jobrunner
