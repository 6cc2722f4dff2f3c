#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gentrans/error.hpp"

namespace gentrans {

enum class TokenKind {
  Identifier,
  Integer,
  String,
  Operator,
  Punctuation,
  DirectiveKey,
};

const char* to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string text;          // exact source spelling
  std::int64_t number = 0;   // payload when kind == Integer
  SourcePos pos;

  // Operator identity; `<>` and `!=` are the same operator.
  std::string_view symbol() const;

  bool is(TokenKind k, std::string_view sym) const { return kind == k && symbol() == sym; }
  bool is_op(std::string_view sym) const { return is(TokenKind::Operator, sym); }
  bool is_punct(std::string_view sym) const { return is(TokenKind::Punctuation, sym); }
  bool is_ident() const { return kind == TokenKind::Identifier; }
  bool is_ident(std::string_view name) const { return is_ident() && text == name; }
  bool is_directive() const { return kind == TokenKind::DirectiveKey; }
  bool is_open_bracket() const;
  bool is_close_bracket() const;

  // Decoded bytes of a string literal (escapes resolved, quotes removed).
  std::string string_value() const;

  // Positions are ignored; integers compare by value, operators by symbol.
  friend bool operator==(const Token& a, const Token& b);
};

using TokenSeq = std::vector<Token>;

struct TokenLine {
  TokenSeq tokens;
  SourcePos pos;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
  const Token& operator[](std::size_t i) const { return tokens[i]; }
  std::span<const Token> span(std::size_t from = 0) const {
    return std::span<const Token>(tokens).subspan(std::min(from, tokens.size()));
  }
};

// Enforces the line-start rule for directive keys: only the first token of
// a line may be a directive key, and an identifier spelled `#x`/`@x` in
// first position becomes one.
TokenLine make_line(TokenSeq tokens, SourcePos pos);

// Space-joined spellings; tokenizing the result yields the same tokens.
std::string render(std::span<const Token> tokens);
inline std::string render(const TokenLine& line) { return render(line.span()); }

bool tokens_equal(std::span<const Token> a, std::span<const Token> b);

// A dotted name `a . b . c` starting at `index`; returns the joined name and
// advances `index` past it. Empty when tokens[index] is not an identifier.
std::string read_dotted_name(std::span<const Token> tokens, std::size_t& index);

}  // namespace gentrans
