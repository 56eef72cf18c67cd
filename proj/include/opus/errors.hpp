#pragma once

#include <stdexcept>
#include <string>

namespace opus {

enum class ErrorCategory {
  InvalidArgument,
  Parse,
  Geometry,
  Config,
  Infeasible,
  Limit,
  Io,
  Internal,
};

const char* error_category_name(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m) : Error(ErrorCategory::Geometry, m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error(ErrorCategory::Config, m) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& m) : Error(ErrorCategory::Parse, m) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& m) : Error(ErrorCategory::Infeasible, m) {}
};

class LimitError : public Error {
 public:
  explicit LimitError(const std::string& m) : Error(ErrorCategory::Limit, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorCategory::Io, m) {}
};

}  // namespace opus
