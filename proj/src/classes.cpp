#include "gentrans/classes.hpp"

#include <algorithm>
#include <set>

namespace gentrans {

std::vector<std::string> ClassDef::params() const {
  std::vector<std::string> out;
  for (const PatternItem& item : pattern) {
    if (item.is_param()) out.push_back(item.name);
  }
  return out;
}

bool ClassDef::answers_to(std::string_view n) const {
  return name == n || std::find(aliases.begin(), aliases.end(), n) != aliases.end();
}

const ClassDef& ClassTable::add(ClassDef def) {
  def.seq = next_seq_++;
  const std::size_t index = defs_.size();
  defs_.push_back(std::move(def));
  const ClassDef& stored = defs_.back();
  by_name_[stored.name].push_back(index);
  for (const std::string& alias : stored.aliases) {
    if (alias != stored.name) by_name_[alias].push_back(index);
  }
  return stored;
}

std::vector<const ClassDef*> ClassTable::candidates(std::string_view name) const {
  std::vector<const ClassDef*> out;
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return out;
  for (auto idx = it->second.rbegin(); idx != it->second.rend(); ++idx) out.push_back(&defs_[*idx]);
  return out;
}

void ClassTable::define_substitution(const std::string& name, TokenSeq replacement) {
  subs_.insert_or_assign(name, std::move(replacement));
}

const TokenSeq* ClassTable::substitution(std::string_view name) const {
  auto it = subs_.find(name);
  return it == subs_.end() ? nullptr : &it->second;
}

bool is_balanced(std::span<const Token> tokens) {
  std::vector<char> stack;
  for (const Token& t : tokens) {
    if (t.is_open_bracket()) {
      stack.push_back(t.text[0]);
    } else if (t.is_close_bracket()) {
      if (stack.empty()) return false;
      char open = stack.back();
      char close = t.text[0];
      if ((open == '(' && close != ')') || (open == '[' && close != ']') || (open == '{' && close != '}')) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

// ---------------------------------------------------------------------------
// Reading definitions

namespace {

[[noreturn]] void syntax_error(const std::string& what, const SourcePos& pos) {
  throw Error(ErrorKind::Syntax, what, pos);
}

std::vector<std::string> read_aliases(std::span<const Token> tokens) {
  std::vector<std::string> out;
  for (const Token& t : tokens) {
    if (t.is_punct(",")) continue;
    if (!t.is_ident()) syntax_error("expected an alias name after the class body, found '" + t.text + "'", t.pos);
    out.push_back(t.text);
  }
  return out;
}

void push_body_line(std::vector<TokenLine>& body, std::span<const Token> tokens) {
  if (tokens.empty()) return;
  body.push_back(make_line(TokenSeq(tokens.begin(), tokens.end()), tokens.front().pos));
}

}  // namespace

ClassSource read_class_source(std::span<const TokenLine> lines) {
  if (lines.empty() || lines[0].empty() || !lines[0][0].is_ident("class")) {
    throw Error(ErrorKind::Internal, "read_class_source called on a non-class line");
  }
  const TokenLine& head = lines[0];
  ClassSource src;

  // Locate the body's opening brace on the header line: the last `{` seen at
  // brace depth zero.
  int depth = 0;
  std::optional<std::size_t> open;
  for (std::size_t j = 1; j < head.size(); ++j) {
    if (head[j].is_punct("{")) {
      if (depth == 0) open = j;
      ++depth;
    } else if (head[j].is_punct("}")) {
      if (--depth < 0) syntax_error("unbalanced '}' in class header", head[j].pos);
    }
  }

  if (open && depth == 0) {
    // Single-line definition: find the matching close of the last group.
    int d = 0;
    std::size_t close = *open;
    for (std::size_t j = *open; j < head.size(); ++j) {
      if (head[j].is_punct("{")) ++d;
      if (head[j].is_punct("}") && --d == 0) {
        close = j;
        break;
      }
    }
    src.header.assign(head.tokens.begin(), head.tokens.begin() + static_cast<std::ptrdiff_t>(*open));
    push_body_line(src.body, head.span(*open + 1).first(close - *open - 1));
    src.aliases = read_aliases(head.span(close + 1));
    return src;
  }

  std::size_t next_line = 1;
  if (open) {
    src.header.assign(head.tokens.begin(), head.tokens.begin() + static_cast<std::ptrdiff_t>(*open));
    push_body_line(src.body, head.span(*open + 1));
  } else {
    // Body opens on a following line that starts with `{`.
    src.header = head.tokens;
    while (next_line < lines.size() && lines[next_line].empty()) ++next_line;
    if (next_line >= lines.size() || !lines[next_line][0].is_punct("{")) {
      syntax_error("class definition has no body", head.pos);
    }
    depth = 1;
    const TokenLine& l = lines[next_line];
    // The opening line may also close the body: `{ db 1 }`.
    std::size_t j = 1;
    std::size_t from = 1;
    for (; j < l.size(); ++j) {
      if (l[j].is_punct("{")) ++depth;
      if (l[j].is_punct("}") && --depth == 0) break;
    }
    if (depth == 0) {
      push_body_line(src.body, l.span(from).first(j - from));
      src.aliases = read_aliases(l.span(j + 1));
      src.line_count = next_line + 1;
      return src;
    }
    push_body_line(src.body, l.span(from));
    ++next_line;
  }

  for (; next_line < lines.size(); ++next_line) {
    const TokenLine& l = lines[next_line];
    for (std::size_t j = 0; j < l.size(); ++j) {
      if (l[j].is_punct("{")) ++depth;
      if (l[j].is_punct("}") && --depth == 0) {
        push_body_line(src.body, l.span(0).first(j));
        src.aliases = read_aliases(l.span(j + 1));
        src.line_count = next_line + 1;
        return src;
      }
    }
    if (!l.empty()) src.body.push_back(l);
  }
  syntax_error("unbalanced '{': class body is never closed", head.pos);
}

const ClassDef& define_class(std::span<const Token> header, std::vector<TokenLine> body,
                             std::vector<std::string> aliases, ClassTable& table) {
  if (header.empty() || !header[0].is_ident("class")) {
    throw Error(ErrorKind::Internal, "class header must start with 'class'");
  }
  const SourcePos pos = header[0].pos;
  if (header.size() < 2 || header[1].kind != TokenKind::Identifier) {
    syntax_error("class definition needs a name", header.size() > 1 ? header[1].pos : pos);
  }

  ClassDef def;
  def.name = header[1].text;
  def.pos = pos;
  def.body = std::move(body);
  def.aliases = std::move(aliases);

  std::set<std::string> seen;
  std::size_t params = 0;
  for (const Token& t : header.subspan(2)) {
    if (t.is_op("..")) {
      if (def.has_variadic) syntax_error("a class pattern may hold only one '..' marker", t.pos);
      def.has_variadic = true;
      def.variadic_at = def.pattern.size();
      def.fixed_count = params;
      continue;
    }
    if (t.is_ident()) {
      if (!seen.insert(t.text).second) syntax_error("duplicate parameter '" + t.text + "'", t.pos);
      def.pattern.push_back(PatternItem{PatternItem::Kind::Param, t.text, {}});
      ++params;
      continue;
    }
    if (def.pattern.empty() || def.pattern.back().is_param() ||
        (def.has_variadic && def.variadic_at == def.pattern.size())) {
      def.pattern.push_back(PatternItem{PatternItem::Kind::Separator, {}, {}});
    }
    def.pattern.back().tokens.push_back(t);
  }
  if (!def.has_variadic) {
    def.fixed_count = params;
    def.variadic_at = def.pattern.size();
  }
  return table.add(std::move(def));
}

// ---------------------------------------------------------------------------
// Matching

namespace {

// Parameters with the separator runs around them: runs[0] leads, runs[i]
// sits between params[i-1] and params[i], runs[n] trails.
struct Shape {
  std::vector<std::string> params;
  std::vector<TokenSeq> runs;
};

Shape shape_of(std::span<const PatternItem> items) {
  Shape s;
  s.runs.emplace_back();
  for (const PatternItem& item : items) {
    if (item.is_param()) {
      s.params.push_back(item.name);
      s.runs.emplace_back();
    } else {
      TokenSeq& run = s.runs.back();
      run.insert(run.end(), item.tokens.begin(), item.tokens.end());
    }
  }
  return s;
}

bool run_at(std::span<const Token> args, std::size_t at, const TokenSeq& run) {
  if (at + run.size() > args.size()) return false;
  return tokens_equal(args.subspan(at, run.size()), run);
}

class Matcher {
 public:
  Matcher(const Shape& shape, std::span<const Token> args) : shape_(shape), args_(args) {}

  std::optional<Binding> run() {
    const std::size_t n = shape_.params.size();
    const TokenSeq& lead = shape_.runs.front();
    const TokenSeq& trail = shape_.runs.back();
    if (n == 0) {
      if (tokens_equal(args_, lead)) return Binding{};
      return std::nullopt;
    }
    if (lead.size() + trail.size() > args_.size()) return std::nullopt;
    if (!run_at(args_, 0, lead) || !run_at(args_, args_.size() - trail.size(), trail)) return std::nullopt;
    lo_ = lead.size();
    ranges_.assign(n, {0, 0});
    if (!solve(n - 1, args_.size() - trail.size())) return std::nullopt;
    Binding b;
    for (std::size_t i = 0; i < n; ++i) {
      auto [from, to] = ranges_[i];
      b[shape_.params[i]] = TokenSeq(args_.begin() + static_cast<std::ptrdiff_t>(from),
                                     args_.begin() + static_cast<std::ptrdiff_t>(to));
    }
    return b;
  }

 private:
  bool usable(std::size_t from, std::size_t to) const {
    return from < to && is_balanced(args_.subspan(from, to - from));
  }

  // Binds params[0..i] given that params[i] ends at `end`.
  bool solve(std::size_t i, std::size_t end) {
    if (i == 0) {
      if (!usable(lo_, end)) return false;
      ranges_[0] = {lo_, end};
      return true;
    }
    const TokenSeq& sep = shape_.runs[i];
    if (sep.empty()) {
      for (std::size_t start = lo_ + 1; start < end; ++start) {
        if (!usable(start, end)) continue;
        ranges_[i] = {start, end};
        if (solve(i - 1, start)) return true;
      }
      return false;
    }
    for (std::size_t start = end; start-- > lo_ + 1 + sep.size();) {
      const std::size_t sep_at = start - sep.size();
      if (!run_at(args_, sep_at, sep) || !usable(start, end)) continue;
      ranges_[i] = {start, end};
      if (solve(i - 1, sep_at)) return true;
    }
    return false;
  }

  const Shape& shape_;
  std::span<const Token> args_;
  std::size_t lo_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> ranges_;
};

std::optional<Binding> match_shape(const Shape& shape, std::span<const Token> args) {
  return Matcher(shape, args).run();
}

std::optional<Binding> match_variadic(const ClassDef& def, std::span<const Token> args) {
  std::span<const PatternItem> items(def.pattern);
  Shape fixed = shape_of(items.first(def.variadic_at));

  // Separators written right after the marker also introduce the tail.
  std::size_t tail_start = def.variadic_at;
  if (tail_start < items.size() && !items[tail_start].is_param()) {
    TokenSeq& intro = fixed.runs.back();
    intro.insert(intro.end(), items[tail_start].tokens.begin(), items[tail_start].tokens.end());
  }
  std::vector<std::string> tail_params;
  for (const PatternItem& item : items.subspan(def.variadic_at)) {
    if (item.is_param()) tail_params.push_back(item.name);
  }

  auto finish = [&](Binding b, std::span<const Token> tail) {
    for (std::size_t i = 0; i < tail_params.size(); ++i) {
      b[tail_params[i]] = i == 0 ? TokenSeq(tail.begin(), tail.end()) : TokenSeq{};
    }
    return b;
  };

  for (std::size_t cut = 0; cut <= args.size(); ++cut) {
    std::span<const Token> tail = args.subspan(cut);
    if (!is_balanced(tail)) continue;
    if (auto b = match_shape(fixed, args.first(cut))) return finish(std::move(*b), tail);
  }
  // No repetitions at all: the introducer may be absent too.
  Shape bare = fixed;
  bare.runs.back().clear();
  if (auto b = match_shape(bare, args)) return finish(std::move(*b), {});
  return std::nullopt;
}

}  // namespace

std::optional<Binding> match_pattern(const ClassDef& def, std::span<const Token> args) {
  if (def.has_variadic) return match_variadic(def, args);
  return match_shape(shape_of(def.pattern), args);
}

std::optional<Resolution> resolve(std::string_view name, std::span<const Token> args, const ClassTable& table) {
  for (const ClassDef* def : table.candidates(name)) {
    if (auto b = match_pattern(*def, args)) return Resolution{def, std::move(*b)};
  }
  return std::nullopt;
}

std::vector<TokenLine> expand(const ClassDef& def, const Binding& binding) {
  std::vector<TokenLine> out;
  out.reserve(def.body.size());
  for (const TokenLine& line : def.body) {
    TokenSeq tokens;
    tokens.reserve(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) {
      const Token& t = line[i];
      const bool member = i > 0 && line[i - 1].is_op(".");
      if (t.kind == TokenKind::Identifier && !member) {
        auto it = binding.find(t.text);
        if (it != binding.end()) {
          tokens.insert(tokens.end(), it->second.begin(), it->second.end());
          continue;
        }
      }
      tokens.push_back(t);
    }
    if (tokens.empty()) continue;
    out.push_back(make_line(std::move(tokens), line.pos));
  }
  return out;
}

void define_symbol_substitution(const std::string& name, TokenSeq replacement, ClassTable& table) {
  table.define_substitution(name, std::move(replacement));
}

TokenSeq apply_symbol_substitutions(std::span<const Token> tokens, const ClassTable& table, std::size_t from) {
  TokenSeq out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (i >= from && t.kind == TokenKind::Identifier) {
      if (const TokenSeq* rep = table.substitution(t.text)) {
        out.insert(out.end(), rep->begin(), rep->end());
        continue;
      }
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace gentrans
