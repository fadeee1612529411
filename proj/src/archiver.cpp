#include "jobrunner/archiver.hpp"

#include "jobrunner/error.hpp"
#include "jobrunner/fsutil.hpp"
#include "jobrunner/glob.hpp"
#include "jobrunner/hash.hpp"
#include "jobrunner/lock.hpp"
#include "jobrunner/tarfile.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstring>
#include <map>

namespace fs = std::filesystem;
using nlohmann::json;

namespace jobrunner {

namespace {

const char* kArchiveDirName = "jobnode.archive";
const char* kCapsuleName = "jobnode.capsule.tar";

bool is_tool_artifact(const std::string& name) {
  return name == "Jobfile" || name == ".job.lock" || name == kArchiveDirName ||
         name.rfind("job.", 0) == 0;
}

std::string capsule_content_hash(const std::vector<std::pair<std::string, std::string>>&
                                     path_hashes /* sorted (path, sha) */) {
  Sha256 h;
  for (const auto& [path, sha] : path_hashes) {
    h.update(sha);
    h.update("  ");
    h.update(path);
    h.update("\n");
  }
  return h.hex_digest();
}

} // namespace

std::string manifest_to_json(const ArchiveManifest& m) {
  json j;
  j["node"] = m.node;
  j["date_dir"] = m.date_dir;
  j["created_at"] = m.created_at;
  j["patterns_used"] = json::array();
  for (const auto& [pattern, origin] : m.patterns_used)
    j["patterns_used"].push_back(json::array({pattern, origin}));
  j["entries"] = json::array();
  for (const ManifestEntry& e : m.entries)
    j["entries"].push_back({{"name", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  return j.dump(2) + "\n";
}

ArchiveManifest manifest_from_json(const std::string& text) {
  json j = json::parse(text);
  ArchiveManifest m;
  m.node = j.at("node").get<std::string>();
  m.date_dir = j.at("date_dir").get<std::string>();
  m.created_at = j.at("created_at").get<std::string>();
  for (const auto& p : j.at("patterns_used"))
    m.patterns_used.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  for (const auto& e : j.at("entries"))
    m.entries.push_back({e.at("name").get<std::string>(), e.at("sha256").get<std::string>(),
                         e.at("bytes").get<std::uint64_t>()});
  return m;
}

std::vector<fs::path> match_files(const fs::path& node,
                                  const std::vector<PatternOrigin>& patterns) {
  for (const PatternOrigin& p : patterns)
    check_pattern(p.pattern);

  std::error_code ec;
  std::vector<fs::path> matched;
  for (const auto& entry : fs::directory_iterator(node, ec)) {
    if (!entry.is_regular_file(ec))
      continue;
    std::string name = entry.path().filename().string();
    if (is_tool_artifact(name))
      continue;
    for (const PatternOrigin& p : patterns) {
      if (glob_match(p.pattern, name)) {
        matched.push_back(entry.path());
        break;
      }
    }
  }
  std::sort(matched.begin(), matched.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return matched;
}

ArchiveManifest archive(const NodeChain& chain, const ArchiveOptions& opts) {
  const fs::path node = chain.target().path;
  std::string date = opts.date.empty() ? archive_date_today() : opts.date;
  if (!is_valid_archive_date(date))
    throw Error(ErrorClass::Usage, "invalid archive date (want mm-dd-yyyy): " + date);

  NodeLock lock(node);

  std::vector<PatternOrigin> patterns = collect_patterns(chain);
  std::vector<fs::path> matched = match_files(node, patterns);

  ArchiveManifest manifest;
  manifest.node = chain.target_rel().generic_string();
  manifest.date_dir = date;
  manifest.created_at = iso8601_now();
  for (const PatternOrigin& p : patterns)
    manifest.patterns_used.emplace_back(
        p.pattern, p.node.lexically_relative(chain.root).generic_string());

  fs::path date_dir = node / kArchiveDirName / date;
  fs::create_directories(date_dir);

  // collision check before any file is touched
  for (const fs::path& src : matched) {
    std::string name = src.filename().string();
    if (name == "manifest.json" || fs::exists(date_dir / name))
      throw CollisionError(name + " already exists in " + date_dir.string());
  }

  for (const fs::path& src : matched) {
    ManifestEntry e;
    e.name = src.filename().string();
    e.sha256 = sha256_file(src);
    e.bytes = fs::file_size(src);
    fs::path dst = date_dir / e.name;
    std::error_code ec;
    if (opts.copy) {
      fs::copy_file(src, dst, ec);
    } else {
      fs::rename(src, dst, ec);
      if (ec) { // cross-device fallback
        ec.clear();
        fs::copy_file(src, dst, ec);
        if (!ec)
          fs::remove(src, ec);
      }
    }
    if (ec)
      throw IOAccessError("cannot archive " + src.string() + ": " + ec.message());
    manifest.entries.push_back(std::move(e));
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.name < b.name; });

  fs::path manifest_path = date_dir / "manifest.json";
  bool have_previous = fs::exists(manifest_path);
  if (manifest.entries.empty() && have_previous)
    return manifest; // nothing new: leave the earlier manifest untouched

  ArchiveManifest on_disk = manifest;
  if (have_previous) {
    // same-day re-archive: accumulate entries so the manifest covers the
    // whole date directory
    ArchiveManifest previous = manifest_from_json(read_file(manifest_path));
    on_disk.entries.insert(on_disk.entries.end(), previous.entries.begin(),
                           previous.entries.end());
    std::sort(on_disk.entries.begin(), on_disk.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.name < b.name; });
  }
  write_file(manifest_path, manifest_to_json(on_disk));
  return manifest;
}

std::filesystem::path export_capsule(const fs::path& root, const fs::path& out) {
  fs::path abs_root = fs::absolute(root).lexically_normal();
  fs::path capsule_path = out.empty() ? abs_root / kCapsuleName : out;

  // every file under any jobnode.archive subtree, root-relative, path-sorted
  std::vector<std::string> rel_paths;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(abs_root, ec);
       it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory(ec)) {
      std::string name = it->path().filename().string();
      if (name == ".git")
        it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file(ec))
      continue;
    fs::path rel = it->path().lexically_relative(abs_root);
    bool in_archive = false;
    for (const auto& part : rel)
      if (part == kArchiveDirName) {
        in_archive = true;
        break;
      }
    if (in_archive)
      rel_paths.push_back(rel.generic_string());
  }
  std::sort(rel_paths.begin(), rel_paths.end());

  std::vector<TarEntry> entries;
  std::vector<std::pair<std::string, std::string>> path_hashes;
  std::vector<std::string> manifests;
  for (const std::string& rel : rel_paths) {
    TarEntry e{rel, read_file(abs_root / rel)};
    path_hashes.emplace_back(rel, sha256_hex(e.data));
    if (rel.size() >= 13 && rel.substr(rel.size() - 13) == "manifest.json")
      manifests.push_back(rel);
    entries.push_back(std::move(e));
  }

  json index;
  index["manifests"] = manifests;
  index["capsule_sha256"] = capsule_content_hash(path_hashes);
  std::vector<TarEntry> all;
  all.push_back({"capsule.json", index.dump(2) + "\n"});
  all.insert(all.end(), std::make_move_iterator(entries.begin()),
             std::make_move_iterator(entries.end()));
  write_tar(capsule_path, all);
  return capsule_path;
}

RestoreReport restore_capsule(const fs::path& capsule, const fs::path& root) {
  fs::path abs_root = fs::absolute(root).lexically_normal();
  std::error_code ec;
  if (!fs::is_directory(abs_root, ec))
    throw MissingNodeError(root.string());

  std::vector<TarEntry> entries = read_tar(capsule);
  const TarEntry* index_entry = nullptr;
  std::vector<const TarEntry*> data;
  for (const TarEntry& e : entries) {
    if (e.path == "capsule.json")
      index_entry = &e;
    else
      data.push_back(&e);
  }
  if (!index_entry)
    throw HashMismatchError("capsule.json (index missing)");

  json index = json::parse(index_entry->data, nullptr, false);
  if (index.is_discarded() || !index.contains("capsule_sha256"))
    throw HashMismatchError("capsule.json (index unreadable)");

  // whole-capsule verification
  std::vector<std::pair<std::string, std::string>> path_hashes;
  for (const TarEntry* e : data)
    path_hashes.emplace_back(e->path, sha256_hex(e->data));
  std::sort(path_hashes.begin(), path_hashes.end());
  if (capsule_content_hash(path_hashes) != index.at("capsule_sha256").get<std::string>())
    throw HashMismatchError("capsule content (index digest differs)");

  // per-entry verification against the manifests carried in the capsule
  std::map<std::string, std::string> expected; // rel path -> sha256
  for (const TarEntry* e : data) {
    if (e->path.size() >= 13 && e->path.substr(e->path.size() - 13) == "manifest.json") {
      ArchiveManifest m = manifest_from_json(e->data);
      std::string dir = e->path.substr(0, e->path.size() - std::strlen("manifest.json"));
      for (const ManifestEntry& me : m.entries)
        expected[dir + me.name] = me.sha256;
    }
  }
  for (const TarEntry* e : data) {
    auto it = expected.find(e->path);
    if (it != expected.end() && sha256_hex(e->data) != it->second)
      throw HashMismatchError(e->path);
  }

  // layout check: every recorded node path must already exist below root
  for (const TarEntry* e : data) {
    fs::path node;
    for (const auto& part : fs::path(e->path)) {
      if (part == kArchiveDirName)
        break;
      node /= part;
    }
    if (node.empty())
      node = ".";
    if (!fs::is_directory(abs_root / node, ec))
      throw LayoutMismatchError(node.generic_string());
  }

  // collision check before writing anything
  RestoreReport report;
  std::vector<const TarEntry*> to_write;
  for (const TarEntry* e : data) {
    fs::path dst = abs_root / e->path;
    if (fs::exists(dst, ec)) {
      if (sha256_file(dst) != sha256_hex(e->data))
        throw CollisionError("existing file differs: " + e->path);
      report.skipped.push_back(e->path);
    } else {
      to_write.push_back(e);
    }
  }
  for (const TarEntry* e : to_write) {
    fs::path dst = abs_root / e->path;
    fs::create_directories(dst.parent_path());
    write_file(dst, e->data);
    report.restored.push_back(e->path);
  }
  return report;
}

} // namespace jobrunner
