#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace softprove {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- rule language --------------------------------------------------------

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string expected);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

class ArityError : public Error {
 public:
  ArityError(std::size_t line, std::size_t column, std::size_t arity);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ScoreRangeError : public Error {
 public:
  explicit ScoreRangeError(double score, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Aggregate of every clause-level diagnostic found while parsing a document.
class DocumentError : public Error {
 public:
  struct Diagnostic {
    std::size_t line;
    std::size_t column;
    std::string message;
  };

  explicit DocumentError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class OccursCheckViolation : public Error {
 public:
  using Error::Error;
};

class DuplicateRuleId : public Error {
 public:
  using Error::Error;
};

// ---- embeddings -----------------------------------------------------------

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& detail);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t line, std::size_t expected, std::size_t got);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptySource : public Error {
 public:
  EmptySource() : Error("embedding source is empty") {}
};

// ---- configuration / schemas ----------------------------------------------

class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---- LLM interaction ------------------------------------------------------

class ClientError : public Error {
 public:
  using Error::Error;
};

/// The reply did not have the expected structure; the raw text is kept.
class ParseFailure : public Error {
 public:
  ParseFailure(const std::string& what, std::string raw_reply);
  const std::string& raw_reply() const { return raw_reply_; }

 private:
  std::string raw_reply_;
};

class UnknownViolation : public Error {
 public:
  explicit UnknownViolation(std::string label);
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class AutoformalizationEmpty : public Error {
 public:
  using Error::Error;
};

}  // namespace softprove
