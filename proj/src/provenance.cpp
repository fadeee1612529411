#include "jobrunner/provenance.hpp"

#include "jobrunner/error.hpp"
#include "jobrunner/fsutil.hpp"
#include "jobrunner/hash.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>

#include <fcntl.h>
#include <sys/file.h>
#include <sys/utsname.h>
#include <unistd.h>

extern char** environ;

namespace fs = std::filesystem;
using nlohmann::json;

namespace jobrunner {

namespace {

// Runs a command, returns trimmed stdout or nullopt on nonzero exit.
std::optional<std::string> run_capture(const std::string& cmd) {
  FILE* pipe = ::popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe)
    return std::nullopt;
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0)
    out.append(buf, n);
  int status = ::pclose(pipe);
  if (status != 0)
    return std::nullopt;
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r'))
    out.pop_back();
  return out;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  out += "'";
  return out;
}

} // namespace

std::vector<std::pair<std::string, std::string>> environment_fingerprint(bool plain) {
  std::vector<std::pair<std::string, std::string>> fp;
  for (char** e = environ; *e; ++e) {
    std::string_view entry(*e);
    std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos)
      continue;
    std::string name(entry.substr(0, eq));
    std::string value(entry.substr(eq + 1));
    fp.emplace_back(std::move(name), plain ? value : sha256_hex(value));
  }
  std::sort(fp.begin(), fp.end());
  return fp;
}

VcsInfo probe_vcs(const fs::path& root) {
  VcsInfo info;
  try {
    std::string git = "git -C " + shell_quote(root.string()) + " ";
    auto commit = run_capture(git + "rev-parse HEAD");
    if (!commit) {
      info.unavailable_reason = "not a repository";
      return info;
    }
    info.available = true;
    info.commit = *commit;
    auto status = run_capture(git + "status --porcelain");
    info.dirty = status && !status->empty();
    auto remote = run_capture(git + "remote get-url origin");
    if (remote)
      info.remote = *remote;
  } catch (...) {
    info.available = false;
    info.unavailable_reason = "probe failed";
  }
  return info;
}

HostInfo probe_host() {
  HostInfo h;
  struct utsname u{};
  if (::uname(&u) == 0) {
    h.os = u.sysname;
    h.release = u.release;
    h.arch = u.machine;
  } else {
    h.os = "unknown";
  }
  return h;
}

ProvenanceRecord record(const std::string& command, const NodeChain& chain,
                        const CompositeScript* composite, const ExecutionResult* execution,
                        const RecordOptions& opts) {
  ProvenanceRecord rec;
  rec.run_id = opts.run_id.empty() ? generate_run_id() : opts.run_id;
  rec.command = command;
  rec.target_node = chain.target_rel().generic_string();
  rec.recorded_at = iso8601_now();

  for (const TreeNode& node : chain.nodes) {
    std::string rel = node.path == chain.root
                          ? "."
                          : node.path.lexically_relative(chain.root).generic_string();
    std::string hash;
    if (node.has_jobfile) {
      try {
        hash = sha256_file(node.path / "Jobfile");
      } catch (...) {
      }
    }
    rec.chain_specs.emplace_back(rel, hash);
  }

  if (composite) {
    for (const ScriptSection& s : composite->sections)
      rec.scripts.emplace_back(s.source_rel, s.sha256);
    rec.composite_hash = sha256_hex(composite->rendered);
  }
  if (execution)
    rec.execution = *execution;

  try {
    rec.env_fingerprint = environment_fingerprint(opts.plain_env);
  } catch (...) {
  }
  rec.vcs = probe_vcs(chain.root);
  rec.host = probe_host();
  return rec;
}

std::string record_to_json_line(const ProvenanceRecord& rec) {
  json j;
  j["v"] = 1;
  j["run_id"] = rec.run_id;
  j["command"] = rec.command;
  j["target_node"] = rec.target_node;
  j["recorded_at"] = rec.recorded_at;
  j["chain_specs"] = json::array();
  for (const auto& [node, hash] : rec.chain_specs) {
    json n{{"node", node}};
    if (!hash.empty())
      n["jobfile_sha256"] = hash;
    j["chain_specs"].push_back(n);
  }
  if (!rec.scripts.empty() || rec.composite_hash) {
    j["scripts"] = json::array();
    for (const auto& [path, hash] : rec.scripts)
      j["scripts"].push_back({{"path", path}, {"sha256", hash}});
  }
  if (rec.composite_hash)
    j["composite_sha256"] = *rec.composite_hash;
  j["environment"] = json::array();
  for (const auto& [name, hash] : rec.env_fingerprint)
    j["environment"].push_back(json::array({name, hash}));
  if (rec.vcs.available) {
    j["vcs"] = {{"commit", rec.vcs.commit}, {"dirty", rec.vcs.dirty}};
    if (!rec.vcs.remote.empty())
      j["vcs"]["remote"] = rec.vcs.remote;
  } else {
    j["vcs"] = "unavailable: " + rec.vcs.unavailable_reason;
  }
  j["host"] = {{"os", rec.host.os}, {"release", rec.host.release}, {"arch", rec.host.arch}};
  if (rec.execution) {
    const ExecutionResult& x = *rec.execution;
    j["execution"] = {{"exit_code", x.exit_code},
                      {"timed_out", x.timed_out},
                      {"started_at", x.started_at},
                      {"finished_at", x.finished_at},
                      {"duration_s", x.duration_s},
                      {"stdout_log", x.stdout_log.filename().string()},
                      {"stderr_log", x.stderr_log.filename().string()}};
  }
  return j.dump() + "\n";
}

fs::path append_log(const ProvenanceRecord& rec, const fs::path& root) {
  fs::path log_path = root / "jobnode.provenance.jsonl";
  std::string line = record_to_json_line(rec);
  int fd = ::open(log_path.c_str(), O_CREAT | O_WRONLY | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0)
    throw IOAccessError("cannot open " + log_path.string());
  ::flock(fd, LOCK_EX);
  ssize_t written = ::write(fd, line.data(), line.size());
  ::flock(fd, LOCK_UN);
  ::close(fd);
  if (written != static_cast<ssize_t>(line.size()))
    throw IOAccessError("short append to " + log_path.string());
  return log_path;
}

} // namespace jobrunner
