#pragma once

#include <filesystem>

namespace jobrunner {

/// Exclusive advisory lock on <node>/.job.lock, held for the object lifetime.
class NodeLock {
public:
  explicit NodeLock(const std::filesystem::path& node);
  NodeLock(const NodeLock&) = delete;
  NodeLock& operator=(const NodeLock&) = delete;
  ~NodeLock();

private:
  int fd_ = -1;
};

} // namespace jobrunner
