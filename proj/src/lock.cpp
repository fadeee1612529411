#include "jobrunner/lock.hpp"

#include "jobrunner/error.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace jobrunner {

NodeLock::NodeLock(const std::filesystem::path& node) {
  std::filesystem::path lock_path = node / ".job.lock";
  fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
  if (fd_ < 0)
    throw IOAccessError("cannot open lock file " + lock_path.string());
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw IOAccessError("cannot lock " + lock_path.string());
  }
}

NodeLock::~NodeLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

} // namespace jobrunner
