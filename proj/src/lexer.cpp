#include "gentrans/lexer.hpp"

#include <array>
#include <limits>

namespace gentrans {

const char* to_string(LineKind kind) {
  switch (kind) {
    case LineKind::SourceDirective: return "source-directive";
    case LineKind::DestDirective: return "dest-directive";
    case LineKind::ClassDefinition: return "class-definition";
    case LineKind::ClassBodyDelimiter: return "class-body-delimiter";
    case LineKind::Assignment: return "assignment";
    case LineKind::Label: return "label";
    case LineKind::DataEmission: return "data-emission";
    case LineKind::SymbolSubstitution: return "symbol-substitution";
    case LineKind::Blank: return "blank";
    case LineKind::Plain: return "plain";
  }
  return "plain";
}

namespace {

constexpr std::array<std::string_view, 10> kTwoCharOps = {
    "<=", ">=", "!=", "<>", "&&", "||", "<<", ">>", ":=", ".."};
constexpr std::string_view kOneCharOps = "+-*/%<>=!~&|^.:?";
constexpr std::string_view kPunctuation = "()[]{},;";

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) { return is_alpha(c) || is_digit(c); }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

int hex_value(char c) {
  if (is_digit(c)) return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

class LineScanner {
 public:
  LineScanner(std::string_view line, const SourcePos& pos) : line_(line), base_(pos) {}

  TokenSeq run() {
    TokenSeq out;
    while (skip_blank()) {
      out.push_back(next(out.empty()));
    }
    return out;
  }

 private:
  SourcePos here(std::size_t at) const {
    SourcePos p = base_;
    p.column = base_.column + static_cast<std::uint32_t>(at);
    return p;
  }

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw Error(ErrorKind::Lexical, what, here(at));
  }

  // Returns false at end of line (or start of a comment).
  bool skip_blank() {
    while (i_ < line_.size() && is_space(line_[i_])) ++i_;
    if (i_ + 1 < line_.size() && line_[i_] == '/' && line_[i_ + 1] == '/') i_ = line_.size();
    return i_ < line_.size();
  }

  Token make(TokenKind kind, std::size_t start) const {
    Token t;
    t.kind = kind;
    t.text = std::string(line_.substr(start, i_ - start));
    t.pos = here(start);
    return t;
  }

  Token next(bool line_start) {
    const std::size_t start = i_;
    const char c = line_[i_];

    if ((c == '#' || c == '@') && i_ + 1 < line_.size() && is_alpha(line_[i_ + 1])) {
      ++i_;
      while (i_ < line_.size() && is_word(line_[i_])) ++i_;
      return make(line_start ? TokenKind::DirectiveKey : TokenKind::Identifier, start);
    }
    if (is_alpha(c)) {
      while (i_ < line_.size() && is_word(line_[i_])) ++i_;
      return make(TokenKind::Identifier, start);
    }
    if (is_digit(c)) return number(start);
    if (c == '\'') return character(start);
    if (c == '"') return string(start);

    if (i_ + 1 < line_.size()) {
      std::string_view two = line_.substr(i_, 2);
      for (std::string_view op : kTwoCharOps) {
        if (two == op) {
          i_ += 2;
          return make(TokenKind::Operator, start);
        }
      }
    }
    if (kOneCharOps.find(c) != std::string_view::npos) {
      ++i_;
      return make(TokenKind::Operator, start);
    }
    if (kPunctuation.find(c) != std::string_view::npos) {
      ++i_;
      return make(TokenKind::Punctuation, start);
    }
    fail("illegal character '" + printable(c) + "'", start);
  }

  static std::string printable(char c) {
    auto u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) return std::string(1, c);
    static constexpr char digits[] = "0123456789ABCDEF";
    return std::string("\\x") + digits[u >> 4] + digits[u & 15];
  }

  Token number(std::size_t start) {
    std::uint64_t value = 0;
    if (line_[i_] == '0' && i_ + 1 < line_.size() && (line_[i_ + 1] == 'x' || line_[i_ + 1] == 'X')) {
      i_ += 2;
      std::size_t digits = 0;
      while (i_ < line_.size() && hex_value(line_[i_]) >= 0) {
        if (++digits > 16) fail("hexadecimal literal does not fit in 64 bits", start);
        value = value * 16 + static_cast<std::uint64_t>(hex_value(line_[i_]));
        ++i_;
      }
      if (digits == 0) fail("invalid numeric literal", start);
    } else {
      constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
      while (i_ < line_.size() && is_digit(line_[i_])) {
        auto d = static_cast<std::uint64_t>(line_[i_] - '0');
        if (value > (kMax - d) / 10) fail("integer literal out of range", start);
        value = value * 10 + d;
        ++i_;
      }
    }
    if (i_ < line_.size() && is_word(line_[i_])) {
      while (i_ < line_.size() && is_word(line_[i_])) ++i_;
      fail("invalid numeric literal '" + std::string(line_.substr(start, i_ - start)) + "'", start);
    }
    Token t = make(TokenKind::Integer, start);
    t.number = static_cast<std::int64_t>(value);
    return t;
  }

  // Reads one possibly escaped character of a quoted literal.
  unsigned char quoted_char(std::size_t start) {
    char c = line_[i_++];
    if (c != '\\') return static_cast<unsigned char>(c);
    if (i_ >= line_.size()) fail("unterminated literal", start);
    char e = line_[i_++];
    switch (e) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case '0': return 0;
      case 'x': {
        int value = 0;
        int digits = 0;
        while (digits < 2 && i_ < line_.size() && hex_value(line_[i_]) >= 0) {
          value = value * 16 + hex_value(line_[i_++]);
          ++digits;
        }
        if (digits == 0) fail("invalid \\x escape", start);
        return static_cast<unsigned char>(value);
      }
      default: return static_cast<unsigned char>(e);
    }
  }

  Token character(std::size_t start) {
    ++i_;
    if (i_ >= line_.size()) fail("unterminated character literal", start);
    if (line_[i_] == '\'') fail("empty character literal", start);
    unsigned char value = quoted_char(start);
    if (i_ >= line_.size()) fail("unterminated character literal", start);
    if (line_[i_] != '\'') fail("character literal holds more than one character", start);
    ++i_;
    Token t = make(TokenKind::Integer, start);
    t.number = value;
    return t;
  }

  Token string(std::size_t start) {
    ++i_;
    while (true) {
      if (i_ >= line_.size()) fail("unterminated string literal", start);
      if (line_[i_] == '"') break;
      quoted_char(start);
    }
    ++i_;
    return make(TokenKind::String, start);
  }

  std::string_view line_;
  SourcePos base_;
  std::size_t i_ = 0;
};

bool is_label_at(std::span<const Token> tokens, std::size_t& i) {
  return !read_dotted_name(tokens, i).empty();
}

}  // namespace

TokenSeq tokenize(std::string_view line, const SourcePos& pos) {
  SourcePos base = pos;
  if (base.column == 0) base.column = 1;
  return LineScanner(line, base).run();
}

std::vector<TokenLine> tokenize_text(std::string_view text, std::string_view file) {
  std::vector<TokenLine> lines;
  std::uint32_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    SourcePos pos{std::string(file), number, 1};
    lines.push_back(make_line(tokenize(text.substr(start, end - start), pos), pos));
    if (end == text.size()) break;
    start = end + 1;
  }
  // A trailing newline does not start another line.
  if (!lines.empty() && lines.back().empty() && !text.empty() && text.back() == '\n') lines.pop_back();
  return lines;
}

bool is_data_keyword(std::string_view word) {
  if (word.size() != 2) return false;
  if (word[0] != 'd' && word[0] != 'r') return false;
  return std::string_view("bwdpq").find(word[1]) != std::string_view::npos;
}

LineKind classify_line(std::span<const Token> tokens) {
  if (tokens.empty()) return LineKind::Blank;
  const Token& first = tokens.front();
  if (first.kind == TokenKind::DirectiveKey) {
    return first.text[0] == '#' ? LineKind::SourceDirective : LineKind::DestDirective;
  }
  if (first.is_ident("class")) return LineKind::ClassDefinition;
  if (first.is_punct("{") || first.is_punct("}")) return LineKind::ClassBodyDelimiter;

  std::size_t i = 0;
  if (is_label_at(tokens, i)) {
    if (i < tokens.size()) {
      const Token& next = tokens[i];
      if (next.is_op(":") && i + 1 == tokens.size()) return LineKind::Label;
      if (next.is_op(":=")) return LineKind::SymbolSubstitution;
      if (next.is_op("=")) return LineKind::Assignment;
      // `name dX ...` defines a named datum.
      if (next.is_ident() && is_data_keyword(next.text)) return LineKind::DataEmission;
    }
    if (is_data_keyword(first.text)) return LineKind::DataEmission;
  }
  return LineKind::Plain;
}

}  // namespace gentrans
