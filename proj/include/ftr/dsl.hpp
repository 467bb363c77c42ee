#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftr/model.hpp"

namespace ftr {

struct SourcePos {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based, in bytes
};

struct SourceSpan {
  SourcePos begin;
  SourcePos end;
};

/// Element keys used in span maps and Diagnostic::element:
///   "<path>"                    component block
///   "<path>#fault:<id>"         fault declaration
///   "<path>#metric:<name>"      metric declaration
///   "<path>#nominal:<name>"     nominal value
///   "<path>#rule:<index>"       on-fault block
///   "<path>#bind:<metric>"      composition binding
///   "<path>#compose"            compose block
std::string element_key(std::string_view path, std::string_view kind = {},
                        std::string_view name = {});

struct ParseDiagnostic {
  std::string code;  // "syntax" or a validation code
  std::string message;
  SourceSpan span;
};

/// Result of parsing model text: either a valid model or diagnostics, never both.
struct ModelDocument {
  std::string source;
  std::optional<SystemModel> model;
  std::map<std::string, SourceSpan> spans;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
  std::optional<SourceSpan> span_of(const std::string& element) const;
};

/// Parses and validates. Never throws on malformed input.
ModelDocument parse_model(std::string_view text);

/// Canonical text: fixed section order, two-space indentation, '\n' line
/// endings, shortest round-trip numbers. parse_model(serialize_model(m)).model == m.
std::string serialize_model(const SystemModel& model);

std::string format_diagnostic(const ParseDiagnostic& diagnostic, std::string_view file = {});

// ---------------------------------------------------------------------------
// Lexer shared with the scenario reader.

namespace dsl {

enum class TokenKind { word, number, string, punct, newline, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;  // unescaped for strings
  double number = 0.0;
  SourcePos pos;
  SourcePos end;
};

class SyntaxError : public std::exception {
 public:
  SyntaxError(std::string message, SourceSpan span) : message_(std::move(message)), span_(span) {}
  const char* what() const noexcept override { return message_.c_str(); }
  const SourceSpan& span() const { return span_; }

 private:
  std::string message_;
  SourceSpan span_;
};

/// Splits text into tokens. Comments run from '#' to end of line. Throws SyntaxError.
std::vector<Token> tokenize(std::string_view text);

/// Line-oriented cursor over a token stream.
class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::end; }
  bool at_line_end() const;

  void skip_newlines();
  void expect_line_end();
  std::string expect_word(std::string_view what);
  double expect_number(std::string_view what);
  std::string expect_string(std::string_view what);
  void expect_punct(char c);
  bool accept_punct(char c);
  bool accept_word(std::string_view word);

  MetricValue parse_value();

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& token, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

std::string quote(std::string_view text);
bool is_identifier(std::string_view text);

}  // namespace dsl
}  // namespace ftr
