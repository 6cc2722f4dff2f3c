#include <doctest.h>

#include <random>

#include "gentrans/error.hpp"
#include "support.hpp"

using namespace gentrans;
using gentrans::testing::toks;

namespace {

LineKind kind_of(std::string_view text) { return classify_line(toks(text)); }

ErrorKind lex_error(std::string_view text) {
  try {
    toks(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error for: " << text);
  return ErrorKind::Internal;
}

// Random line built from a fixed alphabet of lexemes, joined with random
// whitespace. Never contains a comment or a quote character.
std::string random_line(std::mt19937_64& rng) {
  static const std::vector<std::string> lexemes = {
      "db",  "x",   "Sum", "_t1", "P", ".", "0x90", "42", "'A'", "\"hi there\"", "<=", ">=", "!=", "<>", "&&",
      "||",  "<<",  ">>",  ":=",  "..", "+", "-",   "*",  "/",   "%",           "<",  ">",  "=",  "!",  "~",
      "&",   "|",   "^",   ":",   "?",  "(", ")",   "[",  "]",   "{",           "}",  ",",  ";"};
  std::uniform_int_distribution<std::size_t> pick(0, lexemes.size() - 1);
  std::uniform_int_distribution<int> count(0, 12);
  std::uniform_int_distribution<int> gap(1, 3);
  std::string out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    out += lexemes[pick(rng)];
    out += std::string(static_cast<std::size_t>(gap(rng)), i % 2 ? ' ' : '\t');
  }
  return out;
}

}  // namespace

TEST_CASE("data line with a hex literal") {
  TokenSeq t = toks("db 0x90");
  REQUIRE(t.size() == 2);
  CHECK(t[0].kind == TokenKind::Identifier);
  CHECK(t[0].text == "db");
  CHECK(t[1].kind == TokenKind::Integer);
  CHECK(t[1].number == 144);
}

TEST_CASE("character literal is its code point") {
  TokenSeq t = toks("'A'");
  REQUIRE(t.size() == 1);
  CHECK(t[0].kind == TokenKind::Integer);
  CHECK(t[0].number == 65);
  CHECK(toks("'\\n'")[0].number == 10);
}

TEST_CASE("<> is the same operator as != and comments are dropped") {
  TokenSeq t = toks("x <> y // note");
  REQUIRE(t.size() == 3);
  CHECK(t[0].is_ident());
  CHECK(t[1].is_op("!="));
  CHECK(t[2].text == "y");
  CHECK(tokens_equal(t, toks("x != y")));
}

TEST_CASE("multi-character operators are single tokens") {
  for (std::string op : {"<=", ">=", "!=", "<>", "&&", "||", "<<", ">>", ":=", ".."}) {
    TokenSeq t = toks("a " + op + " b");
    REQUIRE(t.size() == 3);
    CHECK(t[1].kind == TokenKind::Operator);
  }
  // No whitespace needed.
  CHECK(toks("a<=b").size() == 3);
  CHECK(toks("x..y").size() == 3);
}

TEST_CASE("string literals keep their spelling and decode escapes") {
  TokenSeq t = toks("\"a\\tb\"");
  REQUIRE(t.size() == 1);
  CHECK(t[0].kind == TokenKind::String);
  CHECK(t[0].string_value() == "a\tb");
  // `//` inside a string is not a comment.
  TokenSeq u = toks("db \"http://x\" // trailing");
  REQUIRE(u.size() == 2);
  CHECK(u[1].string_value() == "http://x");
}

TEST_CASE("directive keys only at line start") {
  TokenSeq t = toks("#while I <= 'Z'");
  CHECK(t[0].kind == TokenKind::DirectiveKey);
  CHECK(t[0].text == "#while");
  TokenSeq a = toks("  @print \"x\"");
  CHECK(a[0].kind == TokenKind::DirectiveKey);
  // `#define` later in a line is an ordinary identifier.
  TokenSeq b = toks("class #define a b");
  CHECK(b[0].is_ident());
  CHECK(b[1].kind == TokenKind::Identifier);
  CHECK(b[1].text == "#define");
}

TEST_CASE("positions are one-based columns") {
  TokenSeq t = tokenize("  db  7", SourcePos{"f", 3, 1});
  CHECK(t[0].pos.line == 3);
  CHECK(t[0].pos.column == 3);
  CHECK(t[1].pos.column == 7);
}

TEST_CASE("lexical errors") {
  CHECK(lex_error("db \"open") == ErrorKind::Lexical);
  CHECK(lex_error("db 12ab") == ErrorKind::Lexical);
  CHECK(lex_error("db 0x") == ErrorKind::Lexical);
  CHECK(lex_error("db 0x12345678901234567") == ErrorKind::Lexical);
  CHECK(lex_error("db 99999999999999999999") == ErrorKind::Lexical);
  CHECK(lex_error("db $") == ErrorKind::Lexical);
  CHECK(lex_error("db 'ab'") == ErrorKind::Lexical);
}

TEST_CASE("lexical error carries the column") {
  try {
    tokenize("db 1, `", SourcePos{"f.src", 2, 1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.pos().line == 2);
    CHECK(e.pos().column == 7);
    CHECK(e.describe().find("f.src:2") == 0);
  }
}

TEST_CASE("line classification") {
  CHECK(kind_of("#while I <= 'Z'") == LineKind::SourceDirective);
  CHECK(kind_of("@endw") == LineKind::DestDirective);
  CHECK(kind_of("Pn:") == LineKind::Label);
  CHECK(kind_of("P.x:") == LineKind::Label);
  CHECK(kind_of("") == LineKind::Blank);
  CHECK(kind_of("   // only a comment") == LineKind::Blank);
  CHECK(kind_of("class nop {db 0x90}") == LineKind::ClassDefinition);
  CHECK(kind_of("}") == LineKind::ClassBodyDelimiter);
  CHECK(kind_of("I = I + 1") == LineKind::Assignment);
  CHECK(kind_of("N := 26") == LineKind::SymbolSubstitution);
  CHECK(kind_of("dd 0xE1A00000") == LineKind::DataEmission);
  CHECK(kind_of("rw 2, 1") == LineKind::DataEmission);
  CHECK(kind_of("table dw 1, 2") == LineKind::DataEmission);
  CHECK(kind_of("nop") == LineKind::Plain);
  CHECK(kind_of("Sum a + b") == LineKind::Plain);
  CHECK(kind_of("x + y = 3") == LineKind::Plain);
}

TEST_CASE("data keywords") {
  for (std::string k : {"db", "dw", "dd", "dp", "dq", "rb", "rw", "rd", "rp", "rq"}) CHECK(is_data_keyword(k));
  for (std::string k : {"d", "dx", "ddd", "rr", "DB", "nop"}) CHECK_FALSE(is_data_keyword(k));
}

TEST_CASE("property: render then tokenize is stable") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const std::string line = random_line(rng);
    TokenSeq first = toks(line);
    TokenSeq again = toks(render(first));
    INFO(line);
    REQUIRE(tokens_equal(first, again));
    // Integer tokens carry the value of their spelling.
    for (const Token& t : first) {
      if (t.kind == TokenKind::Integer && t.text.starts_with("0x")) CHECK(t.number == std::stoll(t.text, nullptr, 16));
    }
  }
}

TEST_CASE("property: a trailing comment changes nothing") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::string line = random_line(rng);
    const std::string tail = random_line(rng) + "\"'`$";
    INFO(line);
    REQUIRE(tokens_equal(toks(line), toks(line + "//" + tail)));
  }
}

TEST_CASE("property: classification is total") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 2000; ++i) {
    const std::string line = random_line(rng);
    CHECK_NOTHROW(classify_line(toks(line)));
  }
}

TEST_CASE("tokenize_text keeps blank lines for numbering") {
  auto lines = tokenize_text("db 1\n\n  // c\ndb 2\n", "f");
  REQUIRE(lines.size() == 4);
  CHECK(lines[1].empty());
  CHECK(lines[3].pos.line == 4);
}
