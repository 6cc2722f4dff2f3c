#include "gentrans/token.hpp"

namespace gentrans {

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Integer: return "integer";
    case TokenKind::String: return "string";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::DirectiveKey: return "directive-key";
  }
  return "token";
}

std::string_view Token::symbol() const {
  if (kind == TokenKind::Operator && text == "<>") return "!=";
  return text;
}

bool Token::is_open_bracket() const {
  return kind == TokenKind::Punctuation && (text == "(" || text == "[" || text == "{");
}

bool Token::is_close_bracket() const {
  return kind == TokenKind::Punctuation && (text == ")" || text == "]" || text == "}");
}

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string Token::string_value() const {
  std::string out;
  if (kind != TokenKind::String || text.size() < 2) return out;
  std::string_view body(text.data() + 1, text.size() - 2);
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c != '\\' || i + 1 >= body.size()) {
      out += c;
      continue;
    }
    char e = body[++i];
    switch (e) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case '0': out += '\0'; break;
      case 'x': {
        int value = 0;
        int digits = 0;
        while (digits < 2 && i + 1 < body.size() && hex_digit(body[i + 1]) >= 0) {
          value = value * 16 + hex_digit(body[++i]);
          ++digits;
        }
        out += static_cast<char>(value);
        break;
      }
      default: out += e; break;
    }
  }
  return out;
}

bool operator==(const Token& a, const Token& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == TokenKind::Integer) return a.number == b.number;
  return a.symbol() == b.symbol();
}

TokenLine make_line(TokenSeq tokens, SourcePos pos) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Token& t = tokens[i];
    bool prefixed = !t.text.empty() && (t.text[0] == '#' || t.text[0] == '@');
    if (i == 0 && t.kind == TokenKind::Identifier && prefixed) t.kind = TokenKind::DirectiveKey;
    if (i != 0 && t.kind == TokenKind::DirectiveKey) t.kind = TokenKind::Identifier;
  }
  if (!pos.known() && !tokens.empty()) pos = tokens.front().pos;
  return TokenLine{std::move(tokens), std::move(pos)};
}

std::string render(std::span<const Token> tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

bool tokens_equal(std::span<const Token> a, std::span<const Token> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

std::string read_dotted_name(std::span<const Token> tokens, std::size_t& index) {
  if (index >= tokens.size() || !tokens[index].is_ident()) return {};
  std::string name = tokens[index++].text;
  while (index + 1 < tokens.size() && tokens[index].is_op(".") && tokens[index + 1].is_ident()) {
    name += '.';
    name += tokens[index + 1].text;
    index += 2;
  }
  return name;
}

}  // namespace gentrans
