#include "jobrunner/tarfile.hpp"

#include "jobrunner/error.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace fs = std::filesystem;

namespace jobrunner {

namespace {

constexpr std::size_t kBlock = 512;

void write_octal(char* field, std::size_t width, std::uint64_t value) {
  // width includes the terminating NUL
  std::snprintf(field, width, "%0*llo", static_cast<int>(width - 1),
                static_cast<unsigned long long>(value));
}

std::array<char, kBlock> make_header(const std::string& path, std::uint64_t size) {
  std::array<char, kBlock> h{};
  std::string name = path, prefix;
  if (name.size() > 100) {
    // split at a '/' so that name fits in 100 bytes and prefix in 155
    std::size_t cut = std::string::npos;
    for (std::size_t i = 0; i < path.size(); ++i)
      if (path[i] == '/' && i <= 155 && path.size() - i - 1 <= 100)
        cut = i;
    if (cut == std::string::npos)
      throw IOAccessError("path too long for capsule entry: " + path);
    prefix = path.substr(0, cut);
    name = path.substr(cut + 1);
  }
  std::memcpy(h.data(), name.data(), name.size());
  write_octal(h.data() + 100, 8, 0644);    // mode
  write_octal(h.data() + 108, 8, 0);       // uid
  write_octal(h.data() + 116, 8, 0);       // gid
  write_octal(h.data() + 124, 12, size);   // size
  write_octal(h.data() + 136, 12, 0);      // mtime
  std::memset(h.data() + 148, ' ', 8);     // checksum placeholder
  h[156] = '0';                            // typeflag: regular file
  std::memcpy(h.data() + 257, "ustar", 6); // magic
  h[263] = '0';
  h[264] = '0'; // version "00"
  std::memcpy(h.data() + 345, prefix.data(), prefix.size());
  unsigned sum = 0;
  for (unsigned char c : h)
    sum += c;
  write_octal(h.data() + 148, 7, sum);
  return h;
}

} // namespace

void write_tar(const fs::path& out, const std::vector<TarEntry>& entries) {
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os)
    throw IOAccessError("cannot write capsule " + out.string());
  std::array<char, kBlock> zero{};
  for (const TarEntry& e : entries) {
    auto h = make_header(e.path, e.data.size());
    os.write(h.data(), kBlock);
    os.write(e.data.data(), static_cast<std::streamsize>(e.data.size()));
    std::size_t pad = (kBlock - e.data.size() % kBlock) % kBlock;
    os.write(zero.data(), static_cast<std::streamsize>(pad));
  }
  os.write(zero.data(), kBlock);
  os.write(zero.data(), kBlock);
  if (!os)
    throw IOAccessError("short write to capsule " + out.string());
}

std::vector<TarEntry> read_tar(const fs::path& in) {
  std::ifstream is(in, std::ios::binary);
  if (!is)
    throw IOAccessError("cannot read capsule " + in.string());
  std::vector<TarEntry> entries;
  std::array<char, kBlock> h{};
  while (is.read(h.data(), kBlock)) {
    bool all_zero = true;
    for (char c : h)
      if (c) {
        all_zero = false;
        break;
      }
    if (all_zero)
      break;
    if (std::memcmp(h.data() + 257, "ustar", 5) != 0)
      throw HashMismatchError("capsule header (not a ustar archive)");
    std::string name(h.data(), strnlen(h.data(), 100));
    std::string prefix(h.data() + 345, strnlen(h.data() + 345, 155));
    std::uint64_t size = std::strtoull(h.data() + 124, nullptr, 8);
    TarEntry e;
    e.path = prefix.empty() ? name : prefix + "/" + name;
    e.data.resize(size);
    if (!is.read(e.data.data(), static_cast<std::streamsize>(size)))
      throw HashMismatchError("capsule truncated at " + e.path);
    std::size_t pad = (kBlock - size % kBlock) % kBlock;
    is.ignore(static_cast<std::streamsize>(pad));
    if (h[156] == '0' || h[156] == '\0')
      entries.push_back(std::move(e));
  }
  return entries;
}

} // namespace jobrunner
