#pragma once

#include "jobrunner/composer.hpp"

#include <optional>
#include <string>

namespace jobrunner {

struct ExecOptions {
  std::optional<std::string> dispatch; // command prefix wrapping the composite path
  std::optional<double> timeout_s;     // kill the process group after this long
  std::string run_id;                  // exported as JOBRUNNER_RUN_ID; generated if empty
};

struct ExecutionResult {
  std::filesystem::path composite_path;
  int exit_code = 0;
  bool timed_out = false;
  std::filesystem::path stdout_log;
  std::filesystem::path stderr_log;
  std::string started_at;  // ISO-8601 UTC
  std::string finished_at; // ISO-8601 UTC
  double duration_s = 0.0;
  std::string run_id;
};

/// Runs the written composite with cwd = target node, streaming stdout/stderr
/// to job.<task>.out / job.<task>.err. Holds <target_node>/.job.lock for the
/// duration. A non-zero script exit is a reported outcome; SpawnError is
/// raised only when the composite cannot be started at all.
ExecutionResult execute(const CompositeScript& composite, const ExecOptions& opts = {});

} // namespace jobrunner
