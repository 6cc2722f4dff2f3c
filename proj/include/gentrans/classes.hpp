#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gentrans/token.hpp"

namespace gentrans {

// One slot of a class pattern: either a parameter name or a run of literal
// separator tokens (operators, punctuation, literals).
struct PatternItem {
  enum class Kind { Param, Separator };
  Kind kind = Kind::Param;
  std::string name;   // Param
  TokenSeq tokens;    // Separator

  bool is_param() const { return kind == Kind::Param; }
};

struct ClassDef {
  std::string name;
  std::vector<std::string> aliases;
  std::vector<PatternItem> pattern;
  // Parameters before the `..` marker. Equals the parameter count when the
  // pattern has no variadic tail.
  std::size_t fixed_count = 0;
  bool has_variadic = false;
  // Index into `pattern` where the `..` marker stood.
  std::size_t variadic_at = 0;
  std::vector<TokenLine> body;
  std::uint64_t seq = 0;
  SourcePos pos;

  std::vector<std::string> params() const;
  bool answers_to(std::string_view n) const;
};

// Parameter name -> bound tokens.
using Binding = std::map<std::string, TokenSeq, std::less<>>;

struct Resolution {
  const ClassDef* def = nullptr;
  Binding binding;
};

// All class definitions of one translation unit plus the `:=` symbol
// substitutions. Definitions are never removed; a redefinition shadows the
// older ones for the arguments it matches.
class ClassTable {
 public:
  const ClassDef& add(ClassDef def);

  bool knows(std::string_view name) const { return by_name_.contains(std::string(name)); }

  // Definitions answering to `name` (canonical or alias), newest first.
  std::vector<const ClassDef*> candidates(std::string_view name) const;

  void define_substitution(const std::string& name, TokenSeq replacement);
  const TokenSeq* substitution(std::string_view name) const;
  bool has_substitutions() const { return !subs_.empty(); }

  std::size_t size() const { return defs_.size(); }
  const ClassDef& at(std::size_t i) const { return defs_[i]; }

 private:
  std::deque<ClassDef> defs_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_name_;
  std::map<std::string, TokenSeq, std::less<>> subs_;
  std::uint64_t next_seq_ = 1;
};

// A class definition as written: the `class name pattern` header, the body
// lines between the outermost braces, and trailing alias names.
struct ClassSource {
  TokenSeq header;
  std::vector<TokenLine> body;
  std::vector<std::string> aliases;
  std::size_t line_count = 1;
};

// Splits the definition starting at lines[0] (whose first token is `class`).
// The body is the last top-level `{...}` group; it may span lines.
ClassSource read_class_source(std::span<const TokenLine> lines);

// Builds the definition from its parts and appends it to `table`.
const ClassDef& define_class(std::span<const Token> header, std::vector<TokenLine> body,
                             std::vector<std::string> aliases, ClassTable& table);

// Matches invocation arguments against a pattern.
//
// Separators only match where every bound segment is non-empty and
// bracket-balanced, so parenthesized operators are never split. Runs are
// placed right to left at their rightmost usable occurrence, which makes a
// binary pattern left-associative. Between two adjacent parameters with no
// separator the left one takes the shortest balanced prefix. A variadic tail
// takes everything after the leftmost place where the fixed part matches.
std::optional<Binding> match_pattern(const ClassDef& def, std::span<const Token> args);

// Tries the definitions of `name` from the newest to the oldest and returns
// the first that matches.
std::optional<Resolution> resolve(std::string_view name, std::span<const Token> args, const ClassTable& table);

// Body lines with every parameter replaced by its bound tokens. An
// identifier right after `.` is a member name and is left alone.
std::vector<TokenLine> expand(const ClassDef& def, const Binding& binding);

void define_symbol_substitution(const std::string& name, TokenSeq replacement, ClassTable& table);

// Replaces each identifier that has a `:=` substitution, once. Replacement
// tokens are not rescanned. Tokens before `from` are left untouched.
TokenSeq apply_symbol_substitutions(std::span<const Token> tokens, const ClassTable& table, std::size_t from = 0);

// True when the brackets in `tokens` nest properly.
bool is_balanced(std::span<const Token> tokens);

}  // namespace gentrans
