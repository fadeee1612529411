#include "jobrunner/tree.hpp"

#include "jobrunner/error.hpp"
#include "jobrunner/fsutil.hpp"

namespace fs = std::filesystem;

namespace jobrunner {

std::filesystem::path NodeChain::target_rel() const {
  if (nodes.size() == 1)
    return ".";
  return nodes.back().path.lexically_relative(root);
}

namespace {

TreeNode load_node(const fs::path& dir) {
  TreeNode node{dir, {}, false};
  fs::path jf = dir / "Jobfile";
  std::error_code ec;
  if (fs::is_regular_file(jf, ec)) {
    node.has_jobfile = true;
    try {
      node.spec = parse_jobfile(read_file(jf));
    } catch (const Error& e) {
      throw JobfileError(dir, e.what());
    }
  }
  return node;
}

} // namespace

NodeChain resolve_chain(const fs::path& root, const fs::path& target) {
  std::error_code ec;
  fs::path abs_root = fs::absolute(root).lexically_normal();
  if (!fs::is_directory(abs_root, ec) || ec)
    throw MissingNodeError(root.string());

  fs::path rel = normalize_relative(target);

  NodeChain chain;
  chain.root = abs_root;
  chain.nodes.push_back(load_node(abs_root));
  if (rel == ".")
    return chain;

  fs::path cur = abs_root;
  for (const auto& part : rel) {
    cur /= part;
    if (!fs::is_directory(cur, ec) || ec)
      throw MissingNodeError(cur.lexically_relative(abs_root).string());
    chain.nodes.push_back(load_node(cur));
  }
  return chain;
}

std::vector<fs::path> collect_scripts(const NodeChain& chain, Task task) {
  std::vector<fs::path> scripts;
  std::error_code ec;
  for (const TreeNode& node : chain.nodes) {
    const auto& names =
        task == Task::Setup ? node.spec.setup_scripts : node.spec.submit_scripts;
    for (const std::string& name : names) {
      fs::path p = node.path / name;
      if (!fs::is_regular_file(p, ec))
        throw MissingScriptError(node.path.lexically_relative(chain.root), name);
      scripts.push_back(p);
    }
  }
  return scripts;
}

std::vector<PatternOrigin> collect_patterns(const NodeChain& chain) {
  std::vector<PatternOrigin> patterns;
  for (const TreeNode& node : chain.nodes)
    for (const std::string& pat : node.spec.archive_patterns)
      patterns.push_back({pat, node.path});
  return patterns;
}

} // namespace jobrunner
