#include "jobrunner/composer.hpp"

#include "jobrunner/error.hpp"
#include "jobrunner/fsutil.hpp"
#include "jobrunner/hash.hpp"

namespace fs = std::filesystem;

namespace jobrunner {

namespace {

bool is_directive(std::string_view line) {
  return line.rfind("#SBATCH", 0) == 0 || line.rfind("#PBS", 0) == 0;
}

// Splits body into (directive lines, remaining body), both newline-terminated.
std::pair<std::string, std::string> hoist_directives(std::string_view body) {
  std::string directives, rest;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t nl = body.find('\n', pos);
    std::string_view line =
        body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? body.size() : nl + 1;
    std::string& dst = is_directive(line) ? directives : rest;
    dst.append(line);
    dst.push_back('\n');
  }
  return {directives, rest};
}

} // namespace

CompositeScript compose(const std::vector<fs::path>& scripts, Task task,
                        const fs::path& target_node, const fs::path& root) {
  CompositeScript composite;
  composite.task = task;
  composite.target_node = fs::absolute(target_node).lexically_normal();
  composite.root = fs::absolute(root).lexically_normal();
  fs::path rel = composite.target_node.lexically_relative(composite.root);
  composite.target_rel = rel.empty() || rel == "." ? "." : rel.generic_string();

  for (const fs::path& script : scripts) {
    ScriptSection section;
    section.source = fs::absolute(script).lexically_normal();
    section.source_rel = section.source.lexically_relative(composite.root).generic_string();
    section.body = read_file(section.source);
    section.sha256 = sha256_hex(section.body);
    composite.sections.push_back(std::move(section));
  }

  std::string directives, bodies;
  for (const ScriptSection& section : composite.sections) {
    auto [dirs, rest] = hoist_directives(section.body);
    directives += dirs;
    bodies += "# --- source: " + section.source_rel + " sha:" + section.sha256 + " ---\n";
    bodies += rest;
  }

  composite.rendered = "#!/bin/sh\n";
  composite.rendered += "# composite " + std::string(to_string(task)) + " script for node " +
                        composite.target_rel + "\n";
  composite.rendered += "set -e\n";
  composite.rendered += directives;
  composite.rendered += bodies;
  return composite;
}

fs::path write_composite(const CompositeScript& composite) {
  fs::path path = composite.composite_path();
  write_executable(path, composite.rendered);
  return path;
}

} // namespace jobrunner
