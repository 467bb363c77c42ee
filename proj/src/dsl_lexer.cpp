#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "ftr/dsl.hpp"

namespace ftr::dsl {

namespace {

bool word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (i_ < text_.size()) {
      const char c = text_[i_];
      if (c == ' ' || c == '\t') {
        advance();
      } else if (c == '\r') {
        advance();
        if (i_ < text_.size() && text_[i_] == '\n') continue;
        emit_newline(out);
      } else if (c == '\n') {
        emit_newline(out);
        advance();
      } else if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n' && text_[i_] != '\r') advance();
      } else if (c == '"') {
        out.push_back(lex_string());
      } else if (digit(c) || ((c == '-' || c == '+' || c == '.') && number_follows())) {
        out.push_back(lex_number());
      } else if (word_start(c)) {
        out.push_back(lex_word());
      } else if (c == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
        Token t{TokenKind::punct, "->", 0.0, pos_, {}};
        advance();
        advance();
        t.end = pos_;
        out.push_back(t);
      } else if (std::string_view("[](){},*").find(c) != std::string_view::npos) {
        Token t{TokenKind::punct, std::string(1, c), 0.0, pos_, {}};
        advance();
        t.end = pos_;
        out.push_back(t);
      } else {
        char shown[8];
        if (std::isprint(static_cast<unsigned char>(c)))
          std::snprintf(shown, sizeof shown, "'%c'", c);
        else
          std::snprintf(shown, sizeof shown, "0x%02X", static_cast<unsigned char>(c));
        throw SyntaxError(std::string("unexpected character ") + shown, {pos_, pos_});
      }
    }
    emit_newline(out);
    out.push_back({TokenKind::end, "", 0.0, pos_, pos_});
    return out;
  }

 private:
  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  void emit_newline(std::vector<Token>& out) {
    if (!out.empty() && out.back().kind != TokenKind::newline)
      out.push_back({TokenKind::newline, "", 0.0, pos_, pos_});
  }

  bool number_follows() const {
    std::size_t j = i_;
    if (text_[j] == '-' || text_[j] == '+') ++j;
    if (j < text_.size() && text_[j] == '.') ++j;
    return j < text_.size() && digit(text_[j]);
  }

  Token lex_number() {
    Token t{TokenKind::number, "", 0.0, pos_, {}};
    const std::size_t start = i_;
    if (text_[i_] == '-' || text_[i_] == '+') advance();
    while (i_ < text_.size() && digit(text_[i_])) advance();
    if (i_ < text_.size() && text_[i_] == '.') {
      advance();
      while (i_ < text_.size() && digit(text_[i_])) advance();
    }
    if (i_ < text_.size() && (text_[i_] == 'e' || text_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < text_.size() && (text_[j] == '+' || text_[j] == '-')) ++j;
      if (j < text_.size() && digit(text_[j])) {
        while (i_ < j) advance();
        while (i_ < text_.size() && digit(text_[i_])) advance();
      }
    }
    t.text = std::string(text_.substr(start, i_ - start));
    std::string_view digits = t.text;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t.number);
    if (ec == std::errc::result_out_of_range) {
      // from_chars leaves the value untouched; keep the sign of the overflow.
      const bool underflow = digits.find("e-") != std::string_view::npos ||
                             digits.find("E-") != std::string_view::npos;
      t.number = underflow ? 0.0 : (digits.front() == '-' ? -HUGE_VAL : HUGE_VAL);
    } else if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw SyntaxError("malformed number '" + t.text + "'", {t.pos, pos_});
    }
    if (i_ < text_.size() && word_start(text_[i_]))
      throw SyntaxError("malformed number '" + t.text + "'", {t.pos, pos_});
    t.end = pos_;
    return t;
  }

  Token lex_word() {
    Token t{TokenKind::word, "", 0.0, pos_, {}};
    const std::size_t start = i_;
    while (i_ < text_.size() && word_char(text_[i_])) {
      if (text_[i_] == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '>') break;
      advance();
    }
    t.text = std::string(text_.substr(start, i_ - start));
    t.end = pos_;
    return t;
  }

  static int hex(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  }

  Token lex_string() {
    Token t{TokenKind::string, "", 0.0, pos_, {}};
    advance();  // opening quote
    while (true) {
      if (i_ >= text_.size() || text_[i_] == '\n' || text_[i_] == '\r')
        throw SyntaxError("unterminated string", {t.pos, pos_});
      const char c = text_[i_];
      if (c == '"') {
        advance();
        break;
      }
      if (c != '\\') {
        t.text += c;
        advance();
        continue;
      }
      const SourcePos escape_pos = pos_;
      advance();
      if (i_ >= text_.size()) throw SyntaxError("unterminated string", {t.pos, pos_});
      const char e = text_[i_];
      advance();
      switch (e) {
        case '\\': t.text += '\\'; break;
        case '"': t.text += '"'; break;
        case 'n': t.text += '\n'; break;
        case 't': t.text += '\t'; break;
        case 'r': t.text += '\r'; break;
        case 'x': {
          int hi = i_ < text_.size() ? hex(text_[i_]) : -1;
          int lo = i_ + 1 < text_.size() ? hex(text_[i_ + 1]) : -1;
          if (hi < 0 || lo < 0) throw SyntaxError("bad \\x escape", {escape_pos, pos_});
          advance();
          advance();
          t.text += static_cast<char>(hi * 16 + lo);
          break;
        }
        default: throw SyntaxError("unknown escape sequence", {escape_pos, pos_});
      }
    }
    t.end = pos_;
    return t;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

const char* describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::word: return "word";
    case TokenKind::number: return "number";
    case TokenKind::string: return "string";
    case TokenKind::punct: return "punctuation";
    case TokenKind::newline: return "end of line";
    case TokenKind::end: return "end of input";
  }
  return "token";
}

std::string shown(const Token& t) {
  if (t.kind == TokenKind::newline || t.kind == TokenKind::end) return describe(t);
  if (t.kind == TokenKind::string) return "string " + quote(t.text);
  return "'" + t.text + "'";
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

const Token& Cursor::peek(std::size_t ahead) const {
  const auto i = std::min(index_ + ahead, tokens_.size() - 1);
  return tokens_[i];
}

const Token& Cursor::next() {
  const Token& t = tokens_[index_];
  if (index_ + 1 < tokens_.size()) ++index_;
  return t;
}

bool Cursor::at_line_end() const {
  return peek().kind == TokenKind::newline || peek().kind == TokenKind::end;
}

void Cursor::skip_newlines() {
  while (peek().kind == TokenKind::newline) next();
}

void Cursor::expect_line_end() {
  if (peek().kind == TokenKind::end) return;
  if (peek().kind != TokenKind::newline) fail("expected end of line, found " + shown(peek()));
  skip_newlines();
}

std::string Cursor::expect_word(std::string_view what) {
  if (peek().kind != TokenKind::word)
    fail("expected " + std::string(what) + ", found " + shown(peek()));
  return next().text;
}

double Cursor::expect_number(std::string_view what) {
  if (peek().kind != TokenKind::number)
    fail("expected " + std::string(what) + ", found " + shown(peek()));
  return next().number;
}

std::string Cursor::expect_string(std::string_view what) {
  if (peek().kind != TokenKind::string)
    fail("expected " + std::string(what) + ", found " + shown(peek()));
  return next().text;
}

void Cursor::expect_punct(char c) {
  if (!accept_punct(c))
    fail(std::string("expected '") + c + "', found " + shown(peek()));
}

bool Cursor::accept_punct(char c) {
  if (peek().kind == TokenKind::punct && peek().text.size() == 1 && peek().text[0] == c) {
    next();
    return true;
  }
  return false;
}

bool Cursor::accept_word(std::string_view word) {
  if (peek().kind == TokenKind::word && peek().text == word) {
    next();
    return true;
  }
  return false;
}

MetricValue Cursor::parse_value() {
  if (peek().kind == TokenKind::number) return next().number;
  if (accept_punct('[')) {
    Interval i;
    i.lo = expect_number("interval lower bound");
    expect_punct(',');
    i.hi = expect_number("interval upper bound");
    expect_punct(']');
    return i;
  }
  if (accept_punct('(')) {
    Vector v;
    if (!accept_punct(')')) {
      do {
        v.push_back(expect_number("vector element"));
      } while (accept_punct(','));
      expect_punct(')');
    }
    return v;
  }
  if (accept_punct('{')) {
    TokenSet s;
    if (!accept_punct('}')) {
      do {
        s.insert(expect_word("set member"));
      } while (accept_punct(','));
      expect_punct('}');
    }
    return s;
  }
  fail("expected a value, found " + shown(peek()));
}

void Cursor::fail(const std::string& message) const { fail_at(peek(), message); }

void Cursor::fail_at(const Token& token, const std::string& message) const {
  throw SyntaxError(message, {token.pos, token.end});
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (const char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
          char buf[5];
          std::snprintf(buf, sizeof buf, "\\x%02X", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

bool is_identifier(std::string_view text) {
  if (text.empty() || !word_start(text.front())) return false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!word_char(text[i])) return false;
    if (text[i] == '-' && i + 1 < text.size() && text[i + 1] == '>') return false;
  }
  return text.back() != '.';
}

}  // namespace ftr::dsl
