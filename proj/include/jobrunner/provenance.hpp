#pragma once

#include "jobrunner/composer.hpp"
#include "jobrunner/executor.hpp"
#include "jobrunner/tree.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jobrunner {

struct VcsInfo {
  bool available = false;
  std::string commit;
  bool dirty = false;
  std::string remote;
  std::string unavailable_reason; // set when !available
};

struct HostInfo {
  std::string os;      // e.g. Linux
  std::string release; // kernel / OS version
  std::string arch;    // machine architecture
};

/// Per-invocation record appended to jobnode.provenance.jsonl (schema v1).
struct ProvenanceRecord {
  std::string run_id;
  std::string command; // setup|submit|archive|export|restore|init|show
  std::string target_node;
  std::string recorded_at;
  std::vector<std::pair<std::string, std::string>> chain_specs; // (node, jobfile sha or "")
  std::vector<std::pair<std::string, std::string>> scripts;     // (rel path, sha256)
  std::optional<std::string> composite_hash;
  std::vector<std::pair<std::string, std::string>> env_fingerprint; // sorted (name, hash)
  VcsInfo vcs;
  HostInfo host;
  std::optional<ExecutionResult> execution;
};

/// Sorted (name, sha256(value)) pairs for the invoking environment; raw
/// values when plain is true.
std::vector<std::pair<std::string, std::string>> environment_fingerprint(bool plain = false);

/// Never throws; failures end up as unavailable_reason.
VcsInfo probe_vcs(const std::filesystem::path& root);

HostInfo probe_host();

struct RecordOptions {
  bool plain_env = false;
  std::string run_id; // generated when empty
};

/// Builds a fully populated record. Capture never fails the run: probe
/// failures are recorded, not thrown.
ProvenanceRecord record(const std::string& command, const NodeChain& chain,
                        const CompositeScript* composite, const ExecutionResult* execution,
                        const RecordOptions& opts = {});

std::string record_to_json_line(const ProvenanceRecord& rec);

/// Appends one JSON line under an advisory lock; returns the log path.
std::filesystem::path append_log(const ProvenanceRecord& rec,
                                 const std::filesystem::path& root);

} // namespace jobrunner
