#pragma once

#include <stdexcept>
#include <string>

namespace volvol {

/// Base class for all library errors. The kind decides the CLI exit status.
class Error : public std::runtime_error {
 public:
  enum class Kind { io, config, data, analysis };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(Kind::io, what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(Kind::config, what) {}
};

// Bad input content: duplicate dates, too few rows.
struct DataError : Error {
  explicit DataError(const std::string& what) : Error(Kind::data, what) {}
};

struct AnalysisError : Error {
  explicit AnalysisError(const std::string& what) : Error(Kind::analysis, what) {}
};

}  // namespace volvol
