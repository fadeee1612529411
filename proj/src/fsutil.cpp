#include "jobrunner/fsutil.hpp"

#include "jobrunner/error.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <sys/stat.h>

namespace fs = std::filesystem;

namespace jobrunner {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IOAccessError("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IOAccessError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out)
    throw IOAccessError("short write to " + path.string());
}

void write_executable(const fs::path& path, std::string_view content) {
  write_file(path, content);
  if (::chmod(path.c_str(), 0755) != 0)
    throw IOAccessError("cannot set executable permission on " + path.string());
}

std::string iso8601_utc(std::chrono::system_clock::time_point tp) {
  std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string iso8601_now() { return iso8601_utc(std::chrono::system_clock::now()); }

std::string archive_date_today() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  localtime_r(&t, &tm);
  char buf[16];
  std::strftime(buf, sizeof buf, "%m-%d-%Y", &tm);
  return buf;
}

bool is_valid_archive_date(const std::string& s) {
  if (s.size() != 10 || s[2] != '-' || s[5] != '-')
    return false;
  for (std::size_t i : {0u, 1u, 3u, 4u, 6u, 7u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      return false;
  int mm = std::stoi(s.substr(0, 2));
  int dd = std::stoi(s.substr(3, 2));
  return mm >= 1 && mm <= 12 && dd >= 1 && dd <= 31;
}

std::string generate_run_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uint64_t hi = rng();
  std::uint64_t lo = rng();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%08x-%04x-%04x-%04x-%012llx",
                static_cast<unsigned>(hi >> 32), static_cast<unsigned>((hi >> 16) & 0xffff),
                static_cast<unsigned>(hi & 0xffff), static_cast<unsigned>(lo >> 48),
                static_cast<unsigned long long>(lo & 0xffffffffffffULL));
  return buf;
}

fs::path normalize_relative(const fs::path& target) {
  if (target.is_absolute())
    throw Error(ErrorClass::Usage, "target must be a relative path: " + target.string());
  fs::path out;
  int depth = 0;
  for (const auto& part : target) {
    std::string p = part.string();
    if (p.empty() || p == ".")
      continue;
    if (p == "..") {
      if (depth == 0)
        throw PathEscapeError(target.string());
      out = out.parent_path();
      --depth;
    } else {
      out /= p;
      ++depth;
    }
  }
  if (out.empty())
    out = ".";
  return out;
}

} // namespace jobrunner
