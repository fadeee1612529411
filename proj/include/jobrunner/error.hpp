#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace jobrunner {

// Error classes map one-to-one onto CLI exit codes.
enum class ErrorClass {
  Usage,       // exit 2
  Jobfile,     // exit 3
  MissingPath, // exit 4
  Execution,   // exit 5
  Collision,   // exit 6
  Capsule,     // exit 7
  IO,          // exit 4
};

inline int exit_code_for(ErrorClass cls) {
  switch (cls) {
  case ErrorClass::Usage:
    return 2;
  case ErrorClass::Jobfile:
    return 3;
  case ErrorClass::MissingPath:
    return 4;
  case ErrorClass::Execution:
    return 5;
  case ErrorClass::Collision:
    return 6;
  case ErrorClass::Capsule:
    return 7;
  case ErrorClass::IO:
    return 4;
  }
  return 1;
}

class Error : public std::runtime_error {
public:
  Error(ErrorClass cls, std::string message)
      : std::runtime_error(std::move(message)), cls_(cls) {}

  ErrorClass error_class() const { return cls_; }
  int exit_code() const { return exit_code_for(cls_); }

private:
  ErrorClass cls_;
};

struct SyntaxError : Error {
  SyntaxError(int line, const std::string& what)
      : Error(ErrorClass::Jobfile,
              "Jobfile syntax error at line " + std::to_string(line) + ": " + what),
        line(line) {}
  int line;
};

struct UnknownKeyError : Error {
  explicit UnknownKeyError(const std::string& key)
      : Error(ErrorClass::Jobfile, "unknown Jobfile key: " + key), key(key) {}
  std::string key;
};

struct InvalidEntryError : Error {
  explicit InvalidEntryError(const std::string& what)
      : Error(ErrorClass::Jobfile, "invalid Jobfile entry: " + what) {}
};

// A jobfile-class failure annotated with the node it occurred in.
struct JobfileError : Error {
  JobfileError(const std::filesystem::path& node, const std::string& what)
      : Error(ErrorClass::Jobfile, node.string() + ": " + what), node(node) {}
  std::filesystem::path node;
};

struct IOAccessError : Error {
  explicit IOAccessError(const std::string& what) : Error(ErrorClass::IO, what) {}
};

struct PathEscapeError : Error {
  explicit PathEscapeError(const std::string& target)
      : Error(ErrorClass::MissingPath, "target escapes experiment root: " + target) {}
};

struct MissingNodeError : Error {
  explicit MissingNodeError(const std::string& target)
      : Error(ErrorClass::MissingPath, "no such node: " + target) {}
};

struct MissingScriptError : Error {
  MissingScriptError(const std::filesystem::path& node, const std::string& script)
      : Error(ErrorClass::MissingPath,
              "missing script " + script + " in node " + node.string()),
        node(node), script(script) {}
  std::filesystem::path node;
  std::string script;
};

struct SpawnError : Error {
  explicit SpawnError(const std::string& what) : Error(ErrorClass::Execution, what) {}
};

struct BadPatternError : Error {
  explicit BadPatternError(const std::string& pattern)
      : Error(ErrorClass::Jobfile, "malformed glob pattern: " + pattern) {}
};

struct CollisionError : Error {
  explicit CollisionError(const std::string& what) : Error(ErrorClass::Collision, what) {}
};

struct HashMismatchError : Error {
  explicit HashMismatchError(const std::string& entry)
      : Error(ErrorClass::Capsule, "hash mismatch for " + entry), entry(entry) {}
  std::string entry;
};

struct LayoutMismatchError : Error {
  explicit LayoutMismatchError(const std::string& node)
      : Error(ErrorClass::Capsule, "node path not present in target root: " + node) {}
};

struct NonEmptyRootError : Error {
  explicit NonEmptyRootError(const std::string& root)
      : Error(ErrorClass::Usage, "refusing to init into non-empty directory: " + root) {}
};

} // namespace jobrunner
