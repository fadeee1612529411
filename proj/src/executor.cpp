#include "jobrunner/executor.hpp"

#include "jobrunner/error.hpp"
#include "jobrunner/fsutil.hpp"
#include "jobrunner/lock.hpp"

#include <chrono>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace jobrunner {

ExecutionResult execute(const CompositeScript& composite, const ExecOptions& opts) {
  const fs::path node = composite.target_node;
  const fs::path path = composite.composite_path();

  if (::access(path.c_str(), F_OK) != 0)
    throw SpawnError("composite not written: " + path.string());
  if (!opts.dispatch && ::access(path.c_str(), X_OK) != 0)
    throw SpawnError("composite not executable: " + path.string());

  ExecutionResult result;
  result.composite_path = path;
  result.run_id = opts.run_id.empty() ? generate_run_id() : opts.run_id;
  std::string base = "job." + std::string(to_string(composite.task));
  result.stdout_log = node / (base + ".out");
  result.stderr_log = node / (base + ".err");

  NodeLock lock(node);

  int out_fd = ::open(result.stdout_log.c_str(), O_CREAT | O_WRONLY | O_TRUNC, 0644);
  int err_fd = ::open(result.stderr_log.c_str(), O_CREAT | O_WRONLY | O_TRUNC, 0644);
  if (out_fd < 0 || err_fd < 0) {
    if (out_fd >= 0)
      ::close(out_fd);
    if (err_fd >= 0)
      ::close(err_fd);
    throw IOAccessError("cannot open log files in " + node.string());
  }

  auto t0 = std::chrono::steady_clock::now();
  result.started_at = iso8601_now();

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(out_fd);
    ::close(err_fd);
    throw SpawnError("fork failed");
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    if (::chdir(node.c_str()) != 0)
      _exit(127);
    ::dup2(out_fd, STDOUT_FILENO);
    ::dup2(err_fd, STDERR_FILENO);
    ::setenv("JOBRUNNER_RUN_ID", result.run_id.c_str(), 1);
    if (opts.dispatch) {
      std::string cmd = *opts.dispatch + " " + path.string();
      ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    } else {
      ::execl(path.c_str(), path.c_str(), static_cast<char*>(nullptr));
    }
    _exit(127);
  }
  ::close(out_fd);
  ::close(err_fd);

  int status = 0;
  if (opts.timeout_s) {
    auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(*opts.timeout_s));
    for (;;) {
      pid_t r = ::waitpid(pid, &status, WNOHANG);
      if (r == pid)
        break;
      if (std::chrono::steady_clock::now() >= deadline) {
        ::kill(-pid, SIGKILL);
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        result.timed_out = true;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  } else {
    while (::waitpid(pid, &status, 0) < 0) {
      if (errno != EINTR)
        throw SpawnError("waitpid failed");
    }
  }

  auto t1 = std::chrono::steady_clock::now();
  result.finished_at = iso8601_now();
  result.duration_s = std::chrono::duration<double>(t1 - t0).count();

  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    result.exit_code = 128 + WTERMSIG(status);
  else
    result.exit_code = -1;
  return result;
}

} // namespace jobrunner
