#include "softprove/errors.hpp"

#include <sstream>

namespace softprove {

namespace {

std::string position(std::size_t line, std::size_t column) {
  return std::to_string(line) + ":" + std::to_string(column);
}

std::string join_lines(const std::vector<DocumentError::Diagnostic>& diags) {
  std::ostringstream out;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    if (i) out << '\n';
    out << position(diags[i].line, diags[i].column) << ": " << diags[i].message;
  }
  return out.str();
}

}  // namespace

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::string expected)
    : Error(position(line, column) + ": syntax error, expected " + expected),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

ArityError::ArityError(std::size_t line, std::size_t column, std::size_t arity)
    : Error(position(line, column) + ": arity " + std::to_string(arity) +
            " exceeds the supported maximum of 3"),
      line_(line),
      column_(column) {}

ScoreRangeError::ScoreRangeError(double score, std::size_t line, std::size_t column)
    : Error((line ? position(line, column) + ": " : std::string()) + "score " +
            std::to_string(score) + " outside (0, 1]"),
      line_(line),
      column_(column) {}

DocumentError::DocumentError(std::vector<Diagnostic> diagnostics)
    : Error(join_lines(diagnostics)), diagnostics_(std::move(diagnostics)) {}

FormatError::FormatError(std::size_t line, const std::string& detail)
    : Error("line " + std::to_string(line) + ": " + detail), line_(line) {}

DimensionMismatch::DimensionMismatch(std::size_t line, std::size_t expected, std::size_t got)
    : Error("line " + std::to_string(line) + ": expected " + std::to_string(expected) +
            " components, got " + std::to_string(got)),
      line_(line) {}

SchemaError::SchemaError(std::vector<std::string> problems)
    : Error([&] {
        std::string msg = "schema error:";
        for (const auto& p : problems) msg += " " + p + ";";
        return msg;
      }()),
      problems_(std::move(problems)) {}

ParseFailure::ParseFailure(const std::string& what, std::string raw_reply)
    : Error(what), raw_reply_(std::move(raw_reply)) {}

UnknownViolation::UnknownViolation(std::string label)
    : Error("unknown moral violation label: '" + label + "'"), label_(std::move(label)) {}

}  // namespace softprove
