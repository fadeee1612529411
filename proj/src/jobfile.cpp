#include "jobrunner/jobfile.hpp"

#include "jobrunner/error.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace fs = std::filesystem;

namespace jobrunner {

namespace {

enum class Key { Setup, Submit, Archive };

std::optional<Key> key_from(const std::string& name) {
  if (name == "setup")
    return Key::Setup;
  if (name == "submit")
    return Key::Submit;
  if (name == "archive")
    return Key::Archive;
  return std::nullopt;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(' ');
  if (b == std::string_view::npos)
    return {};
  std::size_t e = s.find_last_not_of(' ');
  return std::string(s.substr(b, e - b + 1));
}

// Unquotes a scalar entry. Rejects flow collections and unterminated quotes.
std::string parse_scalar(const std::string& raw, int line) {
  if (raw.empty())
    throw SyntaxError(line, "empty entry");
  char c = raw.front();
  if (c == '[' || c == '{')
    throw InvalidEntryError("non-string entry '" + raw + "'");
  if (c == '"' || c == '\'') {
    if (raw.size() < 2 || raw.back() != c)
      throw SyntaxError(line, "unterminated quoted string");
    return raw.substr(1, raw.size() - 2);
  }
  return raw;
}

struct Builder {
  JobfileSpec spec;
  bool seen_setup = false, seen_submit = false, seen_archive = false;

  bool& seen(Key k) {
    switch (k) {
    case Key::Setup:
      return seen_setup;
    case Key::Submit:
      return seen_submit;
    default:
      return seen_archive;
    }
  }

  std::vector<std::string>& list(Key k) {
    switch (k) {
    case Key::Setup:
      return spec.setup_scripts;
    case Key::Submit:
      return spec.submit_scripts;
    default:
      return spec.archive_patterns;
    }
  }

  void open_key(const std::string& name, int line) {
    auto k = key_from(name);
    if (!k)
      throw UnknownKeyError(name);
    if (seen(*k))
      throw SyntaxError(line, "duplicate key '" + name + "'");
    seen(*k) = true;
    if (*k == Key::Archive)
      spec.declares_archive = true;
  }

  void add_entry(Key k, const std::string& raw, int line) {
    std::string value = parse_scalar(raw, line);
    if (value.empty())
      throw InvalidEntryError("empty string entry");
    if (k != Key::Archive) {
      if (value.find('/') != std::string::npos || value.find('\\') != std::string::npos)
        throw InvalidEntryError("script name '" + value + "' contains a path separator");
      if (value == "." || value == "..")
        throw InvalidEntryError("script name '" + value + "' is not a filename");
    }
    auto& dst = list(k);
    if (std::find(dst.begin(), dst.end(), value) != dst.end())
      throw InvalidEntryError("duplicate entry '" + value + "'");
    dst.push_back(value);
  }
};

// Splits a flow collection body on top-level commas, respecting quotes.
std::vector<std::string> split_flow(const std::string& body, int line) {
  std::vector<std::string> parts;
  std::string cur;
  int bracket = 0;
  char quote = 0;
  for (char c : body) {
    if (quote) {
      cur.push_back(c);
      if (c == quote)
        quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
      cur.push_back(c);
    } else if (c == '[' || c == '{') {
      ++bracket;
      cur.push_back(c);
    } else if (c == ']' || c == '}') {
      --bracket;
      if (bracket < 0)
        throw SyntaxError(line, "unbalanced brackets");
      cur.push_back(c);
    } else if (c == ',' && bracket == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quote)
    throw SyntaxError(line, "unterminated quoted string");
  if (bracket != 0)
    throw SyntaxError(line, "unbalanced brackets");
  std::string last = trim(cur);
  if (!last.empty())
    parts.push_back(last);
  else if (!parts.empty())
    throw SyntaxError(line, "trailing comma");
  return parts;
}

// Parses the single-line form: job: {setup: [a.sh], archive: ["*.log"]}
void parse_flow_mapping(Builder& b, const std::string& body, int line) {
  if (body.size() < 2 || body.front() != '{' || body.back() != '}')
    throw SyntaxError(line, "expected a mapping after 'job:'");
  for (const std::string& pair : split_flow(body.substr(1, body.size() - 2), line)) {
    std::size_t colon = pair.find(':');
    if (colon == std::string::npos)
      throw SyntaxError(line, "expected 'key: [entries]' in mapping");
    std::string key = trim(pair.substr(0, colon));
    std::string value = trim(pair.substr(colon + 1));
    b.open_key(key, line);
    if (value.size() < 2 || value.front() != '[' || value.back() != ']')
      throw SyntaxError(line, "value of '" + key + "' must be a list");
    for (const std::string& entry : split_flow(value.substr(1, value.size() - 2), line))
      b.add_entry(*key_from(key), entry, line);
  }
}

} // namespace

JobfileSpec parse_jobfile(std::string_view text) {
  Builder b;
  bool saw_job = false;
  std::optional<Key> open_key;
  int job_indent = -1, key_indent = -1, entry_indent = -1;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                                          : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.find('\t') != std::string_view::npos)
      throw SyntaxError(line_no, "tab character (indentation must use spaces)");

    std::size_t indent = line.find_first_not_of(' ');
    if (indent == std::string_view::npos)
      continue; // blank
    if (line[indent] == '#')
      continue; // comment
    std::string content = trim(line.substr(indent));

    if (!saw_job || static_cast<int>(indent) == 0 ||
        (saw_job && static_cast<int>(indent) <= job_indent)) {
      // top level
      if (content == "job:" || content.rfind("job:", 0) == 0) {
        if (saw_job)
          throw SyntaxError(line_no, "duplicate 'job' mapping");
        saw_job = true;
        job_indent = static_cast<int>(indent);
        std::string rest = trim(content.substr(4));
        if (!rest.empty()) {
          parse_flow_mapping(b, rest, line_no);
          // flow form is complete; further keys belong nowhere
        }
        continue;
      }
      std::size_t colon = content.find(':');
      std::string key = colon == std::string::npos ? content : trim(content.substr(0, colon));
      throw UnknownKeyError(key);
    }

    if (content.rfind("- ", 0) == 0 || content == "-") {
      if (!open_key)
        throw SyntaxError(line_no, "list entry outside any key");
      int ind = static_cast<int>(indent);
      if (entry_indent == -1) {
        if (ind <= key_indent)
          throw SyntaxError(line_no, "entry must be indented past its key");
        entry_indent = ind;
      } else if (ind != entry_indent) {
        throw SyntaxError(line_no, "inconsistent entry indentation");
      }
      b.add_entry(*open_key, trim(content.substr(1)), line_no);
      continue;
    }

    // key line under job
    std::size_t colon = content.find(':');
    if (colon == std::string::npos)
      throw SyntaxError(line_no, "expected 'key:' line");
    std::string key = trim(content.substr(0, colon));
    std::string rest = trim(content.substr(colon + 1));
    int ind = static_cast<int>(indent);
    if (key_indent == -1) {
      key_indent = ind;
    } else if (ind != key_indent) {
      throw SyntaxError(line_no, "inconsistent key indentation");
    }
    b.open_key(key, line_no);
    open_key = key_from(key);
    entry_indent = -1;
    if (!rest.empty()) {
      // inline flow list value
      if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']')
        throw SyntaxError(line_no, "value of '" + key + "' must be a list");
      for (const std::string& entry : split_flow(rest.substr(1, rest.size() - 2), line_no))
        b.add_entry(*open_key, entry, line_no);
      open_key.reset();
    }
  }

  if (!saw_job)
    throw SyntaxError(line_no, "missing 'job:' mapping");
  return b.spec;
}

std::string serialize_jobfile(const JobfileSpec& spec) {
  std::string out = "job:\n";
  auto emit = [&out](const char* key, const std::vector<std::string>& items, bool quote) {
    out += "  ";
    out += key;
    out += ":\n";
    for (const std::string& item : items) {
      out += "    - ";
      if (quote)
        out += '"' + item + '"';
      else
        out += item;
      out += '\n';
    }
  };
  if (!spec.setup_scripts.empty())
    emit("setup", spec.setup_scripts, false);
  if (!spec.submit_scripts.empty())
    emit("submit", spec.submit_scripts, false);
  if (spec.declares_archive || !spec.archive_patterns.empty())
    emit("archive", spec.archive_patterns, true);
  return out;
}

std::vector<Finding> validate_spec(const JobfileSpec& spec, const fs::path& node_dir) {
  std::error_code ec;
  if (!fs::is_directory(node_dir, ec) || ec)
    throw IOAccessError("node directory unreadable: " + node_dir.string());
  std::vector<Finding> findings;
  auto check = [&](const std::vector<std::string>& scripts) {
    for (const std::string& name : scripts) {
      if (!fs::is_regular_file(node_dir / name, ec))
        findings.push_back({Finding::Kind::MissingScript, node_dir, name});
    }
  };
  check(spec.setup_scripts);
  check(spec.submit_scripts);
  return findings;
}

} // namespace jobrunner
