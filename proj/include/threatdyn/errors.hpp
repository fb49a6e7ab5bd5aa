#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace threatdyn {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// One or more parameters outside their declared ranges.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(const std::string& what, std::vector<std::string> fields)
      : std::invalid_argument(what), fields_(std::move(fields)) {}
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}

  const std::vector<std::string>& fields() const noexcept { return fields_; }

 private:
  std::vector<std::string> fields_;
};

// Problem in a configuration file; line is 1-based, 0 when not tied to a line.
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& what, std::size_t line)
      : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what
                                 : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Missing or mismatched column / name.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed CSV cell. Row and column are 1-based file coordinates.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error("row " + std::to_string(row) + ", column " +
                           std::to_string(column) + ": " + what),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rank-deficient regression design; names the columns found dependent.
class SingularDesignError : public std::runtime_error {
 public:
  SingularDesignError(const std::string& what, std::vector<std::string> columns)
      : std::runtime_error(what), columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::vector<std::string> columns_;
};

// A single run failed inside a sweep.
class SweepError : public ValidationError {
 public:
  SweepError(const std::string& what, std::size_t run_id)
      : ValidationError("run " + std::to_string(run_id) + ": " + what),
        run_id_(run_id) {}

  std::size_t run_id() const noexcept { return run_id_; }

 private:
  std::size_t run_id_;
};

}  // namespace threatdyn
