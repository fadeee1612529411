#pragma once

#include "jobrunner/tree.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace jobrunner {

struct ManifestEntry {
  std::string name; // original filename within the node
  std::string sha256;
  std::uint64_t bytes = 0;

  bool operator==(const ManifestEntry&) const = default;
};

/// Record of one dated archive directory, serialized as manifest.json.
struct ArchiveManifest {
  std::string node;     // root-relative node path
  std::string date_dir; // mm-dd-yyyy
  std::string created_at;
  std::vector<std::pair<std::string, std::string>> patterns_used; // (pattern, origin)
  std::vector<ManifestEntry> entries;                             // sorted by name
};

struct ArchiveOptions {
  std::string date; // mm-dd-yyyy; today when empty
  bool copy = false; // copy instead of move
};

struct RestoreReport {
  std::vector<std::string> restored; // root-relative paths written
  std::vector<std::string> skipped;  // already present with identical content
};

/// Regular files directly inside node whose basename matches any pattern.
/// Excludes Jobfile, job.* artifacts, the lock file, and jobnode.archive.
/// Result is sorted by filename, duplicate-free.
std::vector<std::filesystem::path>
match_files(const std::filesystem::path& node, const std::vector<PatternOrigin>& patterns);

/// Moves (or copies) matched files into jobnode.archive/<date>/ under the
/// chain's target node and writes manifest.json beside them. Returns the
/// manifest for this run; on-disk manifest accumulates across same-day runs.
ArchiveManifest archive(const NodeChain& chain, const ArchiveOptions& opts = {});

/// Packs every jobnode.archive subtree under root into a deterministic
/// capsule with a verifying index. Returns the capsule path.
std::filesystem::path export_capsule(const std::filesystem::path& root,
                                     const std::filesystem::path& out = {});

/// Unpacks a capsule below root, verifying the index and every manifest hash.
/// Refuses to overwrite differing files.
RestoreReport restore_capsule(const std::filesystem::path& capsule,
                              const std::filesystem::path& root);

std::string manifest_to_json(const ArchiveManifest& m);
ArchiveManifest manifest_from_json(const std::string& text);

} // namespace jobrunner
