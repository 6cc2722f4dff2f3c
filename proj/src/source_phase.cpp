#include "gentrans/source_phase.hpp"

#include "gentrans/directives.hpp"
#include "gentrans/expr.hpp"
#include "gentrans/lexer.hpp"

namespace gentrans {

namespace {

std::size_t statement_extent(std::span<const TokenLine> rest) {
  if (!rest.empty() && !rest[0].empty() && rest[0][0].is_ident("class")) return read_class_source(rest).line_count;
  return 1;
}

class SourcePhase final : public DirectiveHost {
 public:
  SourcePhase(SymbolTable& env, ClassTable& table, DiagnosticLog& log, const SourceLimits& limits)
      : env_(env), table_(table), log_(log), limits_(limits), engine_('#', *this, limits.loop_cap) {}

  IntermediateStream run(std::span<const TokenLine> lines) {
    ControlProgram program = parse_control(lines, '#', statement_extent);
    engine_.run(program);
    return std::move(stream_);
  }

  Flow statement(std::span<const TokenLine> lines) override {
    const TokenLine& line = lines.front();
    switch (classify_line(line)) {
      case LineKind::Blank:
        return Flow::normal();
      case LineKind::ClassDefinition: {
        ClassSource src = read_class_source(lines);
        define_class(src.header, std::move(src.body), std::move(src.aliases), table_);
        return Flow::normal();
      }
      case LineKind::ClassBodyDelimiter:
        throw Error(ErrorKind::Syntax, "'" + line[0].text + "' outside a class definition", line.pos);
      case LineKind::SourceDirective:
        return key_invocation(line, true);
      case LineKind::DestDirective:
        return key_invocation(line, false);
      case LineKind::SymbolSubstitution:
        substitution(line);
        return Flow::normal();
      case LineKind::Assignment:
        assignment(line);
        return Flow::normal();
      case LineKind::Label:
      case LineKind::DataEmission:
      case LineKind::Plain:
        return content(line);
    }
    return Flow::normal();
  }

  Value value(const TokenLine& /*head*/, std::span<const Token> expr) override {
    TokenSeq tokens = transform(expr, 0);
    return evaluate(tokens, env_);
  }

  void print(const TokenLine& head, const std::string& text) override { log_.print('#', text, head.pos); }

  [[noreturn]] void raise(const TokenLine& head, const std::string& text) override {
    log_.error('#', text, head.pos);
    throw Error(ErrorKind::User, text, head.pos);
  }

 private:
  void emit(TokenLine line) { stream_.lines.push_back(std::move(line)); }

  // Expands a resolved invocation and processes the result as source lines.
  Flow run_expansion(const Resolution& res, const TokenLine& site) {
    enter(site);
    std::vector<TokenLine> lines = expand(*res.def, res.binding);
    ControlProgram program = parse_control(lines, '#', statement_extent);
    Flow f = engine_.run(program);
    --depth_;
    return f;
  }

  void enter(const TokenLine& site) {
    if (++depth_ > limits_.max_depth) {
      --depth_;
      throw Error(ErrorKind::Recursion,
                  "class expansion deeper than " + std::to_string(limits_.max_depth) +
                      " levels (circular class definitions?)",
                  site.pos);
    }
  }

  std::optional<Resolution> leading(std::span<const Token> tokens) const {
    if (tokens.empty() || !table_.knows(tokens[0].text)) return std::nullopt;
    return resolve(tokens[0].text, tokens.subspan(1), table_);
  }

  // `#name ...` / `@name ...` that is not a built-in directive: a class
  // invocation when one matches. Unmatched `@` lines belong to the next level.
  Flow key_invocation(const TokenLine& line, bool source_level) {
    if (auto res = leading(line.span())) return run_expansion(*res, line);
    if (source_level) {
      throw Error(ErrorKind::Syntax, "unknown directive '" + line[0].text + "'", line.pos);
    }
    emit(make_line(transform(line.span(), 1), line.pos));
    return Flow::normal();
  }

  void substitution(const TokenLine& line) {
    if (!line[0].is_ident() || !line[1].is_op(":=")) {
      throw Error(ErrorKind::Syntax, "symbol substitution needs a plain identifier before ':='", line.pos);
    }
    define_symbol_substitution(line[0].text, TokenSeq(line.tokens.begin() + 2, line.tokens.end()), table_);
  }

  void assignment(const TokenLine& line) {
    std::size_t eq = 0;
    const std::string name = read_dotted_name(line.span(), eq);
    TokenSeq tokens = transform(line.span(), eq + 1);
    try {
      env_.assign(name, evaluate(std::span<const Token>(tokens).subspan(eq + 1), env_));
    } catch (const Error& e) {
      // Not computable at this level (labels, later variables): the
      // destination level evaluates it.
      if (e.kind() != ErrorKind::Evaluation) throw;
      env_.erase(name);
    }
    emit(make_line(std::move(tokens), line.pos));
  }

  Flow content(const TokenLine& line) {
    if (auto res = leading(line.span())) return run_expansion(*res, line);
    TokenSeq tokens = transform(line.span(), 0);
    if (!tokens_equal(tokens, line.span())) {
      if (auto res = leading(tokens)) return run_expansion(*res, line);
    }
    emit(make_line(std::move(tokens), line.pos));
    return Flow::normal();
  }

  // In-line functional replacements, then one round of symbol substitution.
  TokenSeq transform(std::span<const Token> tokens, std::size_t from) {
    TokenSeq out = inline_replace(TokenSeq(tokens.begin(), tokens.end()), from);
    if (table_.has_substitutions()) out = apply_symbol_substitutions(out, table_, from);
    return out;
  }

  // Replaces `name(args)`-style invocations inside a line. Only definitions
  // whose pattern opens with a separator and whose body is at most one line
  // qualify; the longest matching argument span wins.
  TokenSeq inline_replace(TokenSeq tokens, std::size_t from) {
    std::size_t replaced = 0;
    std::size_t i = from;
    while (i < tokens.size()) {
      if (tokens[i].kind != TokenKind::Identifier || !table_.knows(tokens[i].text)) {
        ++i;
        continue;
      }
      bool done = false;
      for (const ClassDef* def : table_.candidates(tokens[i].text)) {
        if (def->pattern.empty() || def->pattern.front().is_param() || def->body.size() > 1) continue;
        const TokenSeq& opener = def->pattern.front().tokens;
        std::span<const Token> after = std::span<const Token>(tokens).subspan(i + 1);
        if (after.size() < opener.size() || !tokens_equal(after.first(opener.size()), opener)) continue;
        for (std::size_t len = after.size(); len >= opener.size() && !done; --len) {
          auto binding = match_pattern(*def, after.first(len));
          if (!binding) continue;
          if (++replaced > limits_.max_depth) {
            throw Error(ErrorKind::Recursion,
                        "in-line expansion of '" + def->name + "' repeated more than " +
                            std::to_string(limits_.max_depth) + " times (circular class definitions?)",
                        tokens[i].pos);
          }
          std::vector<TokenLine> body = expand(*def, *binding);
          TokenSeq next(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(i));
          if (!body.empty()) next.insert(next.end(), body[0].tokens.begin(), body[0].tokens.end());
          next.insert(next.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i + 1 + len), tokens.end());
          tokens = std::move(next);
          done = true;
        }
        if (done) break;
      }
      if (!done) ++i;
    }
    return tokens;
  }

  SymbolTable& env_;
  ClassTable& table_;
  DiagnosticLog& log_;
  SourceLimits limits_;
  DirectiveEngine engine_;
  IntermediateStream stream_;
  std::size_t depth_ = 0;
};

}  // namespace

IntermediateStream run_source_phase(std::span<const TokenLine> lines, SymbolTable& env, ClassTable& table,
                                    DiagnosticLog& log, const SourceLimits& limits) {
  SourcePhase phase(env, table, log, limits);
  return phase.run(lines);
}

}  // namespace gentrans
