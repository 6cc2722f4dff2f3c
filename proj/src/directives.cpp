#include "gentrans/directives.hpp"

namespace gentrans {

std::optional<Directive> directive_of(const Token& t, char prefix) {
  if (t.kind != TokenKind::DirectiveKey || t.text.empty() || t.text[0] != prefix) return std::nullopt;
  std::string_view name = std::string_view(t.text).substr(1);
  if (name == "if") return Directive::If;
  if (name == "elif") return Directive::Elif;
  if (name == "else") return Directive::Else;
  if (name == "endif") return Directive::Endif;
  if (name == "while") return Directive::While;
  if (name == "endw") return Directive::Endw;
  if (name == "repeat") return Directive::Repeat;
  if (name == "until") return Directive::Until;
  if (name == "break") return Directive::Break;
  if (name == "error") return Directive::Error;
  if (name == "print") return Directive::Print;
  return std::nullopt;
}

namespace {

[[noreturn]] void structure_error(const std::string& what, const SourcePos& pos) {
  throw Error(ErrorKind::Structure, what, pos);
}

class ControlParser {
 public:
  ControlParser(std::span<const TokenLine> lines, char prefix, const StatementExtent& extent)
      : lines_(lines), prefix_(prefix), extent_(extent) {}

  ControlBlock parse_all() {
    ControlBlock root = parse_block();
    if (i_ < lines_.size()) {
      const TokenLine& l = lines_[i_];
      structure_error("unmatched " + l[0].text, l.pos);
    }
    return root;
  }

 private:
  std::optional<Directive> at() const {
    if (i_ >= lines_.size() || lines_[i_].empty()) return std::nullopt;
    return directive_of(lines_[i_][0], prefix_);
  }

  std::string key(Directive d) const {
    static constexpr const char* names[] = {"if",    "elif",   "else",  "endif", "while", "endw",
                                            "repeat", "until", "break", "error", "print"};
    return std::string(1, prefix_) + names[static_cast<int>(d)];
  }

  // Parses statements until a closing directive (left unconsumed) or the end.
  ControlBlock parse_block() {
    ControlBlock block;
    while (i_ < lines_.size()) {
      if (lines_[i_].empty()) {
        ++i_;
        continue;
      }
      auto d = at();
      if (d == Directive::Elif || d == Directive::Else || d == Directive::Endif || d == Directive::Endw ||
          d == Directive::Until) {
        return block;
      }
      if (d == Directive::If) {
        block.push_back(parse_conditional());
      } else if (d == Directive::While) {
        block.push_back(parse_loop(ControlNode::Kind::While, Directive::Endw));
      } else if (d == Directive::Repeat) {
        block.push_back(parse_loop(ControlNode::Kind::Repeat, Directive::Until));
      } else {
        ControlNode node;
        node.first = i_;
        node.count = d ? 1 : std::max<std::size_t>(1, extent_ ? extent_(lines_.subspan(i_)) : 1);
        i_ += node.count;
        block.push_back(std::move(node));
      }
    }
    return block;
  }

  ControlNode parse_conditional() {
    ControlNode node;
    node.kind = ControlNode::Kind::Conditional;
    node.first = i_;
    const SourcePos open = lines_[i_].pos;
    bool seen_else = false;
    while (true) {
      const std::size_t head = i_;
      const Directive d = *at();
      if (d != Directive::Else && lines_[head].size() < 2) {
        structure_error(lines_[head][0].text + " needs a condition", lines_[head].pos);
      }
      ++i_;
      node.branches.push_back(ControlBranch{head, parse_block()});
      auto next = at();
      if (!next) structure_error(key(Directive::If) + " without " + key(Directive::Endif), open);
      if (*next == Directive::Endif) {
        ++i_;
        return node;
      }
      if (*next == Directive::Elif || *next == Directive::Else) {
        if (seen_else) {
          structure_error(lines_[i_][0].text + " after " + key(Directive::Else), lines_[i_].pos);
        }
        seen_else = *next == Directive::Else;
        continue;
      }
      structure_error("unmatched " + lines_[i_][0].text, lines_[i_].pos);
    }
  }

  ControlNode parse_loop(ControlNode::Kind kind, Directive closer) {
    ControlNode node;
    node.kind = kind;
    node.first = i_;
    const TokenLine& head = lines_[i_];
    if (kind == ControlNode::Kind::While && head.size() < 2) {
      structure_error(head[0].text + " needs a condition", head.pos);
    }
    ++i_;
    node.body = parse_block();
    auto next = at();
    if (next != closer) {
      if (!next) structure_error(head[0].text + " without " + key(closer), head.pos);
      structure_error("unmatched " + lines_[i_][0].text, lines_[i_].pos);
    }
    node.close = i_++;
    if (kind == ControlNode::Kind::Repeat && head.size() < 2 && lines_[node.close].size() < 2) {
      throw Error(ErrorKind::Config,
                  head[0].text + " has neither a count nor a " + key(Directive::Until) + " condition and would never stop",
                  head.pos);
    }
    return node;
  }

  std::span<const TokenLine> lines_;
  char prefix_;
  const StatementExtent& extent_;
  std::size_t i_ = 0;
};

}  // namespace

ControlProgram parse_control(std::span<const TokenLine> lines, char prefix, const StatementExtent& extent) {
  ControlParser parser(lines, prefix, extent);
  return ControlProgram{lines, parser.parse_all()};
}

DirectiveEngine::DirectiveEngine(char prefix, DirectiveHost& host, std::uint64_t loop_cap)
    : prefix_(prefix), host_(host), loop_cap_(loop_cap) {}

Flow DirectiveEngine::run_block(const ControlProgram& program, const ControlBlock& block) {
  for (const ControlNode& node : block) {
    Flow f = run_node(program, node);
    if (f.breaking()) return f;
  }
  return Flow::normal();
}

Flow DirectiveEngine::run_node(const ControlProgram& program, const ControlNode& node) {
  switch (node.kind) {
    case ControlNode::Kind::Conditional: return run_conditional(program, node);
    case ControlNode::Kind::While: return run_while(program, node);
    case ControlNode::Kind::Repeat: return run_repeat(program, node);
    case ControlNode::Kind::Statement: break;
  }
  const TokenLine& line = program.lines[node.first];
  if (auto d = directive_of(line[0], prefix_)) return run_directive_statement(line, *d);
  return host_.statement(program.lines.subspan(node.first, node.count));
}

Flow DirectiveEngine::run_conditional(const ControlProgram& program, const ControlNode& node) {
  for (const ControlBranch& branch : node.branches) {
    const TokenLine& head = program.lines[branch.head];
    const bool is_else = directive_of(head[0], prefix_) == Directive::Else;
    if (!is_else && !host_.condition(head, head.span(1))) continue;
    host_.enter_branch(head);
    Flow f = run_block(program, branch.body);
    host_.leave_branch(head);
    return f;
  }
  return Flow::normal();
}

void DirectiveEngine::count_iteration(std::uint64_t& n, const TokenLine& head) const {
  if (++n > loop_cap_) {
    throw Error(ErrorKind::Runaway, head[0].text + " loop exceeded " + std::to_string(loop_cap_) + " iterations",
                head.pos);
  }
}

Flow DirectiveEngine::run_while(const ControlProgram& program, const ControlNode& node) {
  const TokenLine& head = program.lines[node.first];
  std::uint64_t iterations = 0;
  ++loop_depth_;
  Flow result = Flow::normal();
  while (host_.condition(head, head.span(1))) {
    count_iteration(iterations, head);
    Flow f = run_block(program, node.body);
    if (!f.breaking() || f.levels == 0) continue;
    if (f.levels > 1) result = Flow::brk(f.levels - 1);
    break;
  }
  --loop_depth_;
  return result;
}

Flow DirectiveEngine::run_repeat(const ControlProgram& program, const ControlNode& node) {
  const TokenLine& head = program.lines[node.first];
  const TokenLine& until = program.lines[node.close];
  std::optional<std::int64_t> times;
  if (head.size() > 1) {
    Value v = host_.value(head, head.span(1));
    if (!v.is_int()) throw Error(ErrorKind::Evaluation, head[0].text + " count must be an integer", head.pos);
    times = v.as_int();
    if (*times <= 0) return Flow::normal();
  }
  const bool has_condition = until.size() > 1;

  std::uint64_t iterations = 0;
  ++loop_depth_;
  Flow result = Flow::normal();
  while (true) {
    count_iteration(iterations, head);
    Flow f = run_block(program, node.body);
    if (f.breaking() && f.levels > 0) {
      if (f.levels > 1) result = Flow::brk(f.levels - 1);
      break;
    }
    if (has_condition && host_.condition(until, until.span(1))) break;
    if (times && iterations >= static_cast<std::uint64_t>(*times)) break;
  }
  --loop_depth_;
  return result;
}

std::string DirectiveEngine::render_message(const TokenLine& head) {
  std::span<const Token> args = head.span(1);
  std::string out;
  std::size_t start = 0;
  int depth = 0;
  auto item = [&](std::size_t from, std::size_t to) {
    std::span<const Token> part = args.subspan(from, to - from);
    if (part.empty()) return;
    try {
      out += host_.value(head, part).to_display();
    } catch (const Error& e) {
      // Plain words are shown as written.
      if (e.kind() != ErrorKind::Evaluation && e.kind() != ErrorKind::Syntax) throw;
      out += render(part);
    }
  };
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].is_open_bracket()) ++depth;
    if (args[i].is_close_bracket()) --depth;
    if (depth == 0 && args[i].is_punct(",")) {
      item(start, i);
      start = i + 1;
    }
  }
  item(start, args.size());
  return out;
}

Flow DirectiveEngine::run_directive_statement(const TokenLine& line, Directive d) {
  switch (d) {
    case Directive::Print:
      host_.print(line, render_message(line));
      return Flow::normal();
    case Directive::Error:
      host_.raise(line, render_message(line));
      throw Error(ErrorKind::Internal, "error directive did not abort", line.pos);
    case Directive::Break: {
      std::int64_t levels = 1;
      if (line.size() > 1) {
        Value v = host_.value(line, line.span(1));
        if (!v.is_int() || v.as_int() < 0) {
          throw Error(ErrorKind::Evaluation, line[0].text + " levels must be a non-negative integer", line.pos);
        }
        levels = v.as_int();
      }
      const std::int64_t needed = std::max<std::int64_t>(levels, 1);
      if (needed > loop_depth_) {
        throw Error(ErrorKind::Structure,
                    loop_depth_ == 0 ? line[0].text + " outside a loop"
                                     : line[0].text + " " + std::to_string(levels) + " exceeds the loop nesting depth " +
                                           std::to_string(loop_depth_),
                    line.pos);
      }
      return Flow::brk(static_cast<int>(levels));
    }
    default:
      break;
  }
  throw Error(ErrorKind::Internal, "directive " + line[0].text + " reached the statement path", line.pos);
}

}  // namespace gentrans
