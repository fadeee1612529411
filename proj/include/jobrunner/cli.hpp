#pragma once

namespace jobrunner {

/// Entry point for the jobrunner command line. Returns the process exit code
/// (0 success, 2 usage, 3 Jobfile error, 4 missing script/path, 5 execution
/// failure, 6 archive collision, 7 capsule verification failure).
int run_cli(int argc, char** argv);

} // namespace jobrunner
