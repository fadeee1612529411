#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace jobrunner {

/// Incremental SHA-256, hex-encoded output.
class Sha256 {
public:
  Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;
  ~Sha256();

  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }

  /// Finalizes and returns the lowercase hex digest. Call at most once.
  std::string hex_digest();

private:
  void* ctx_;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

} // namespace jobrunner
