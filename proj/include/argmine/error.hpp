#pragma once

#include <stdexcept>
#include <string>

namespace argmine {

// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON syntax, embedding rows, model files).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ")"
                   : what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed input that breaks a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration: missing resources, model/feature mismatch,
// impossible fold counts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A statistic whose value is mathematically undefined for the input
// (zero variance, zero expected disagreement, ...).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

}  // namespace argmine
