#pragma once

#include <stdexcept>
#include <string>

namespace zlab {

/// Base for every error raised by the library. `module()` names the
/// subsystem that raised it so front ends can report "solver: ..." etc.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("model", "parse error: " + what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("model", what) {}
};

class TransformError : public Error {
 public:
  explicit TransformError(const std::string& what) : Error("transform", what) {}
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double t)
      : Error("solver", what + " (t=" + std::to_string(t) + ")"), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class StefanError : public Error {
 public:
  explicit StefanError(const std::string& what) : Error("stefan", what) {}
};

class ZeroError : public Error {
 public:
  explicit ZeroError(const std::string& what) : Error("zeros", what) {}
};

class HarnessError : public Error {
 public:
  explicit HarnessError(const std::string& what) : Error("harness", what) {}
};

}  // namespace zlab
