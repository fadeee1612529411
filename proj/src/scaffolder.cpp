#include "jobrunner/scaffolder.hpp"

#include "jobrunner/error.hpp"
#include "jobrunner/fsutil.hpp"
#include "jobrunner/jobfile.hpp"

namespace fs = std::filesystem;

namespace jobrunner {

namespace {

const char* kEnvironmentStub = R"(#!/bin/sh
# Shared environment for every task in this experiment tree.
# Set compiler, library, and installation variables here, e.g.:
#   CC=mpicc
#   INSTALL_PREFIX="$HOME/opt"
)";

std::string setup_stub(const std::string& name) {
  return "#!/bin/sh\n"
         "# Setup commands for " + name + ".\n"
         "# Replace with configure/build steps; variables from environment.sh\n"
         "# are already in effect when this runs.\n";
}

std::string submit_stub(const std::string& name) {
  return "#!/bin/sh\n"
         "# Run commands for " + name + ".\n"
         "# Replace with the actual launch invocation.\n";
}

const char* kRunTestsStub = R"(#!/bin/sh
# Driver for the test suite listed in Tests.suite.
)";

const char* kTestsSuiteStub = "# One test specification per line.\n";

struct StubPage {
  const char* file;
  const char* heading;
  const char* hint;
};

constexpr StubPage kNotebookPages[] = {
    {"Purpose.md", "Title and Purpose", "Project name and a brief description of its objectives."},
    {"Design.md", "Experiment Design",
     "Algorithms, data sets, parameters, assumptions, and the reasoning behind the runs."},
    {"DataSources.md", "Data Sources",
     "External data used, where it is stored, and any preprocessing steps."},
    {"Results.md", "Results and Analysis",
     "Tables, graphs, statistical analyses, and how the results were interpreted."},
    {"References.md", "References",
     "Citations, software documentation, and external resources."},
};

void created(std::vector<fs::path>& report, fs::path p) { report.push_back(std::move(p)); }

} // namespace

std::vector<fs::path> init_tree(const fs::path& root, const std::string& experiment_name,
                                const std::vector<std::string>& software,
                                const std::vector<std::string>& simulations) {
  std::error_code ec;
  if (fs::exists(root, ec) && (!fs::is_directory(root, ec) || !fs::is_empty(root, ec)))
    throw NonEmptyRootError(root.string());
  fs::create_directories(root);

  std::vector<fs::path> report;

  write_executable(root / "environment.sh", kEnvironmentStub);
  created(report, root / "environment.sh");

  JobfileSpec root_spec;
  root_spec.setup_scripts = {"environment.sh"};
  root_spec.submit_scripts = {"environment.sh"};
  write_file(root / "Jobfile", serialize_jobfile(root_spec));
  created(report, root / "Jobfile");

  for (const std::string& name : software) {
    fs::path dir = root / "software" / name;
    fs::create_directories(dir);
    std::string script = "setup_" + name + ".sh";
    write_executable(dir / script, setup_stub(name));
    JobfileSpec spec;
    spec.setup_scripts = {script};
    write_file(dir / "Jobfile", serialize_jobfile(spec));
    created(report, dir / script);
    created(report, dir / "Jobfile");
  }

  for (const std::string& name : simulations) {
    fs::path dir = root / "simulation" / name;
    fs::create_directories(dir);
    std::string setup = "setup_" + name + ".sh";
    std::string submit = "submit_" + name + ".sh";
    write_executable(dir / setup, setup_stub(name));
    write_executable(dir / submit, submit_stub(name));
    JobfileSpec spec;
    spec.setup_scripts = {setup};
    spec.submit_scripts = {submit};
    spec.declares_archive = true; // archive list starts empty
    write_file(dir / "Jobfile", serialize_jobfile(spec));
    fs::create_directories(dir / "jobnode.archive");
    created(report, dir / setup);
    created(report, dir / submit);
    created(report, dir / "Jobfile");
    created(report, dir / "jobnode.archive");
  }

  fs::path tests = root / "tests";
  fs::create_directories(tests);
  write_executable(tests / "runTests.sh", kRunTestsStub);
  write_file(tests / "Tests.suite", kTestsSuiteStub);
  JobfileSpec tests_spec;
  tests_spec.submit_scripts = {"runTests.sh"};
  write_file(tests / "Jobfile", serialize_jobfile(tests_spec));
  created(report, tests / "runTests.sh");
  created(report, tests / "Tests.suite");
  created(report, tests / "Jobfile");

  for (const StubPage& page : kNotebookPages) {
    std::string body = "# " + std::string(page.heading) + "\n\n";
    if (std::string(page.file) == "Purpose.md")
      body += "Experiment: " + experiment_name + "\n\n";
    body += "<!-- " + std::string(page.hint) + " -->\n";
    write_file(root / page.file, body);
    created(report, root / page.file);
  }
  return report;
}

std::vector<Finding> verify_tree(const fs::path& root) {
  std::error_code ec;
  std::vector<Finding> findings;
  fs::path abs_root = fs::absolute(root).lexically_normal();

  auto visit = [&](const fs::path& dir, auto&& self) -> void {
    fs::path rel = dir == abs_root ? "." : dir.lexically_relative(abs_root);
    JobfileSpec spec;
    bool parsed = false;
    fs::path jf = dir / "Jobfile";
    if (fs::is_regular_file(jf, ec)) {
      try {
        spec = parse_jobfile(read_file(jf));
        parsed = true;
      } catch (const Error& e) {
        findings.push_back({Finding::Kind::BadJobfile, rel, e.what()});
      }
    }
    if (parsed)
      for (const Finding& f : validate_spec(spec, dir))
        findings.push_back({f.kind, rel, f.detail});
    if (fs::is_directory(dir / "jobnode.archive", ec) && !spec.declares_archive &&
        spec.archive_patterns.empty())
      findings.push_back({Finding::Kind::OrphanArchive, rel,
                          "jobnode.archive present but no archive key declared"});

    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (!entry.is_directory(ec))
        continue;
      std::string name = entry.path().filename().string();
      if (name == "jobnode.archive" || name == ".git")
        continue;
      self(entry.path(), self);
    }
  };
  visit(abs_root, visit);
  return findings;
}

} // namespace jobrunner
