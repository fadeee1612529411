#include "jobrunner/cli.hpp"

#include "jobrunner/archiver.hpp"
#include "jobrunner/composer.hpp"
#include "jobrunner/error.hpp"
#include "jobrunner/executor.hpp"
#include "jobrunner/fsutil.hpp"
#include "jobrunner/provenance.hpp"
#include "jobrunner/scaffolder.hpp"
#include "jobrunner/tree.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace jobrunner {

namespace {

struct GlobalOptions {
  std::string root = ".";
  bool json_output = false;
  bool dry_run = false;
  bool plain_env = false;
};

struct TaskOptions {
  std::optional<std::string> dispatch;
  std::optional<double> timeout_s;
};

fs::path resolve_root(const GlobalOptions& g) {
  fs::path root = fs::absolute(g.root).lexically_normal();
  std::error_code ec;
  if (!fs::is_directory(root, ec))
    throw MissingNodeError(g.root);
  return root;
}

void report(const std::string& msg) { std::cerr << "jobrunner: " << msg << "\n"; }

// Runs setup/submit for one target; returns the composite's exit code.
int run_task(Task task, const fs::path& root, const std::string& target,
             const GlobalOptions& g, const TaskOptions& t, json& summary) {
  NodeChain chain = resolve_chain(root, target);
  std::vector<fs::path> scripts = collect_scripts(chain, task);
  CompositeScript composite = compose(scripts, task, chain.target().path, root);

  if (g.dry_run) {
    report(std::string(to_string(task)) + " " + target + " (dry run):");
    for (const ScriptSection& s : composite.sections)
      report("  would stitch " + s.source_rel);
    report("  would write " + composite.composite_path().string());
    summary.push_back({{"node", target}, {"status", "dry-run"},
                       {"scripts", scripts.size()}});
    return 0;
  }

  write_composite(composite);
  ExecOptions eo;
  eo.dispatch = t.dispatch;
  eo.timeout_s = t.timeout_s;
  eo.run_id = generate_run_id();
  ExecutionResult result = execute(composite, eo);

  ProvenanceRecord rec =
      record(to_string(task), chain, &composite, &result, {g.plain_env, eo.run_id});
  append_log(rec, root);

  summary.push_back({{"node", target},
                     {"status", result.timed_out ? "timeout"
                                : result.exit_code == 0 ? "ok"
                                                        : "failed"},
                     {"exit_code", result.exit_code},
                     {"run_id", eo.run_id}});
  if (result.timed_out) {
    report(std::string(to_string(task)) + " " + target + " timed out");
    return 5;
  }
  if (result.exit_code != 0) {
    report(std::string(to_string(task)) + " " + target + " failed with exit code " +
           std::to_string(result.exit_code) + " (see " + result.stderr_log.string() + ")");
    return 5;
  }
  report(std::string(to_string(task)) + " " + target + " ok");
  return 0;
}

int run_archive(const fs::path& root, const std::string& target, const GlobalOptions& g,
                const ArchiveOptions& ao, json& summary) {
  NodeChain chain = resolve_chain(root, target);
  if (g.dry_run) {
    std::vector<PatternOrigin> patterns = collect_patterns(chain);
    std::vector<fs::path> matched = match_files(chain.target().path, patterns);
    report("archive " + target + " (dry run):");
    for (const fs::path& f : matched)
      report("  would archive " + f.filename().string());
    summary.push_back({{"node", target}, {"status", "dry-run"}, {"files", matched.size()}});
    return 0;
  }
  ArchiveManifest manifest = archive(chain, ao);
  ProvenanceRecord rec = record("archive", chain, nullptr, nullptr, {g.plain_env, ""});
  append_log(rec, root);
  report("archive " + target + ": " + std::to_string(manifest.entries.size()) +
         " file(s) -> jobnode.archive/" + manifest.date_dir);
  summary.push_back({{"node", target},
                     {"status", "ok"},
                     {"date_dir", manifest.date_dir},
                     {"files", manifest.entries.size()}});
  return 0;
}

void emit_summary(const GlobalOptions& g, const std::string& command, const json& targets) {
  if (!g.json_output)
    return;
  json out{{"command", command}, {"targets", targets}};
  std::cout << out.dump() << "\n";
}

} // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Directory-tree experiment manager: stitches inherited job scripts, "
               "runs them, and archives outputs with provenance"};
  app.require_subcommand(1);
  app.fallthrough(); // lets --root/--json appear after the subcommand

  GlobalOptions g;
  app.add_option("--root", g.root, "Experiment root (default: current directory)");
  app.add_flag("--json", g.json_output, "Machine-readable summary on stdout");

  TaskOptions topt;
  ArchiveOptions aopt;
  std::vector<std::string> targets;
  std::string task_name, capsule_path, experiment_name = "experiment";
  std::vector<std::string> software, simulations;

  CLI::App* setup = app.add_subcommand("setup", "Stitch and run setup scripts for node(s)");
  CLI::App* submit = app.add_subcommand("submit", "Stitch and run submit scripts for node(s)");
  for (CLI::App* cmd : {setup, submit}) {
    cmd->add_option("target", targets, "Node path(s) relative to the root")->required();
    cmd->add_flag("--dry-run", g.dry_run, "Print the plan without touching anything");
    cmd->add_flag("--plain-env", g.plain_env, "Record raw environment values in provenance");
    cmd->add_option("--timeout", topt.timeout_s, "Kill the job after this many seconds");
  }
  submit->add_option("--dispatch", topt.dispatch,
                     "Command prefix wrapping the composite (e.g. sbatch)");

  CLI::App* archive_cmd = app.add_subcommand("archive", "Move matched outputs to a dated archive");
  archive_cmd->add_option("target", targets, "Node path(s)")->required();
  archive_cmd->add_option("--date", aopt.date, "Archive date dir (mm-dd-yyyy; default today)");
  archive_cmd->add_flag("--copy", aopt.copy, "Copy files instead of moving them");
  archive_cmd->add_flag("--dry-run", g.dry_run, "List matches without archiving");
  archive_cmd->add_flag("--plain-env", g.plain_env, "Record raw environment values");

  CLI::App* export_cmd = app.add_subcommand("export", "Pack all archives into a capsule");
  std::string export_out;
  export_cmd->add_option("-o,--output", export_out, "Capsule path (default jobnode.capsule.tar)");

  CLI::App* restore_cmd = app.add_subcommand("restore", "Unpack and verify a capsule");
  restore_cmd->add_option("capsule", capsule_path, "Capsule file")->required();

  CLI::App* init_cmd = app.add_subcommand("init", "Seed a new experiment tree");
  init_cmd->add_option("name", experiment_name, "Experiment name");
  init_cmd->add_option("--software", software, "Software node(s) to scaffold");
  init_cmd->add_option("--simulation", simulations, "Simulation node(s) to scaffold");

  CLI::App* show_cmd = app.add_subcommand("show", "Print the composite a task would run");
  show_cmd->add_option("task", task_name, "setup or submit")->required();
  show_cmd->add_option("target", targets, "Node path")->required()->expected(1);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Check tree conformance");
  (void)verify_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  json summary = json::array();
  try {
    if (command == "init") {
      fs::path root = fs::absolute(g.root).lexically_normal();
      auto created = init_tree(root, experiment_name, software, simulations);
      report("initialized " + root.string() + " (" + std::to_string(created.size()) +
             " paths)");
      summary.push_back({{"node", "."}, {"status", "ok"}, {"created", created.size()}});
      emit_summary(g, command, summary);
      return 0;
    }

    fs::path root = resolve_root(g);

    if (command == "setup" || command == "submit") {
      Task task = command == "setup" ? Task::Setup : Task::Submit;
      for (const std::string& target : targets) {
        int code = run_task(task, root, target, g, topt, summary);
        if (code != 0) {
          emit_summary(g, command, summary);
          return code;
        }
      }
    } else if (command == "archive") {
      for (const std::string& target : targets) {
        int code = run_archive(root, target, g, aopt, summary);
        if (code != 0) {
          emit_summary(g, command, summary);
          return code;
        }
      }
    } else if (command == "export") {
      fs::path capsule = export_capsule(root, export_out.empty() ? fs::path{}
                                                                 : fs::path(export_out));
      NodeChain chain = resolve_chain(root, ".");
      append_log(record("export", chain, nullptr, nullptr, {g.plain_env, ""}), root);
      report("exported " + capsule.string());
      summary.push_back({{"node", "."}, {"status", "ok"}, {"capsule", capsule.string()}});
    } else if (command == "restore") {
      RestoreReport rr = restore_capsule(capsule_path, root);
      NodeChain chain = resolve_chain(root, ".");
      append_log(record("restore", chain, nullptr, nullptr, {g.plain_env, ""}), root);
      report("restored " + std::to_string(rr.restored.size()) + " file(s), " +
             std::to_string(rr.skipped.size()) + " already present");
      summary.push_back({{"node", "."},
                         {"status", "ok"},
                         {"restored", rr.restored.size()},
                         {"skipped", rr.skipped.size()}});
    } else if (command == "show") {
      Task task;
      if (task_name == "setup")
        task = Task::Setup;
      else if (task_name == "submit")
        task = Task::Submit;
      else
        throw Error(ErrorClass::Usage, "unknown task '" + task_name + "'");
      NodeChain chain = resolve_chain(root, targets.front());
      CompositeScript composite =
          compose(collect_scripts(chain, task), task, chain.target().path, root);
      std::cout << composite.rendered;
      return 0;
    } else if (command == "verify") {
      std::vector<Finding> findings = verify_tree(root);
      for (const Finding& f : findings) {
        report(std::string(to_string(f.kind)) + " at " + f.node.string() + ": " + f.detail);
        summary.push_back({{"node", f.node.string()},
                           {"finding", to_string(f.kind)},
                           {"detail", f.detail}});
      }
      if (findings.empty())
        report("tree conformant");
      emit_summary(g, command, summary);
      return findings.empty() ? 0 : 1;
    }
  } catch (const Error& e) {
    report(e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    report(e.what());
    return 1;
  }
  emit_summary(g, command, summary);
  return 0;
}

} // namespace jobrunner
