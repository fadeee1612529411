#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace jobrunner {

struct TarEntry {
  std::string path; // relative, '/'-separated
  std::string data;
};

/// Writes a ustar archive with fixed metadata (mode 0644, uid/gid 0, mtime 0)
/// so that identical entry lists produce byte-identical archives.
void write_tar(const std::filesystem::path& out, const std::vector<TarEntry>& entries);

/// Reads the regular-file entries of a ustar archive written by write_tar.
std::vector<TarEntry> read_tar(const std::filesystem::path& in);

} // namespace jobrunner
