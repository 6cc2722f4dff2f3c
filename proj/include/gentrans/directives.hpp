#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gentrans/token.hpp"
#include "gentrans/value.hpp"

// Control-directive interpreter shared by both processing levels. The
// source level drives it with prefix '#', the destination level with '@';
// the two differ only in what their host does with ordinary statements.

namespace gentrans {

enum class Directive { If, Elif, Else, Endif, While, Endw, Repeat, Until, Break, Error, Print };

// Built-in directive named by `t` for the given prefix, if any.
std::optional<Directive> directive_of(const Token& t, char prefix);

// Result of running a block. levels < 0: fell through normally. Otherwise a
// break is unwinding: 0 continues the innermost loop, k exits k loops.
struct Flow {
  int levels = -1;

  bool breaking() const { return levels >= 0; }
  static Flow normal() { return {}; }
  static Flow brk(int n) { return Flow{n}; }
};

struct ControlNode;
using ControlBlock = std::vector<ControlNode>;

struct ControlBranch {
  std::size_t head = 0;  // line of the #if / #elif / #else
  ControlBlock body;
};

struct ControlNode {
  enum class Kind { Statement, Conditional, While, Repeat };
  Kind kind = Kind::Statement;
  std::size_t first = 0;  // Statement: first line; loops: opening line
  std::size_t count = 1;  // Statement: number of lines
  std::size_t close = 0;  // loops: the #endw / #until line
  std::vector<ControlBranch> branches;
  ControlBlock body;
};

// Number of lines taken by the statement starting at rest[0] (at least 1).
using StatementExtent = std::function<std::size_t(std::span<const TokenLine> rest)>;

struct ControlProgram {
  std::span<const TokenLine> lines;
  ControlBlock root;
};

// Groups lines into nested conditionals and loops. Structural faults
// (unmatched closers, a missing #endif, #else after #else, a #repeat that
// could never stop) are reported here.
ControlProgram parse_control(std::span<const TokenLine> lines, char prefix, const StatementExtent& extent = {});

class DirectiveHost {
 public:
  virtual ~DirectiveHost() = default;

  // Runs a non-directive statement. May run nested programs through the
  // same engine and hand back their break.
  virtual Flow statement(std::span<const TokenLine> lines) = 0;

  // Evaluates the argument of a directive line.
  virtual Value value(const TokenLine& head, std::span<const Token> expr) = 0;

  // #if / #elif / #while / #until condition.
  virtual bool condition(const TokenLine& head, std::span<const Token> expr) { return truthy(value(head, expr)); }

  // #print and #error. `text` is already rendered. For errors the host
  // records the message and throws.
  virtual void print(const TokenLine& head, const std::string& text) = 0;
  [[noreturn]] virtual void raise(const TokenLine& head, const std::string& text) = 0;

  virtual void enter_branch(const TokenLine& /*head*/) {}
  virtual void leave_branch(const TokenLine& /*head*/) {}
};

class DirectiveEngine {
 public:
  DirectiveEngine(char prefix, DirectiveHost& host, std::uint64_t loop_cap);

  Flow run(const ControlProgram& program) { return run_block(program, program.root); }

  int loop_depth() const { return loop_depth_; }
  char prefix() const { return prefix_; }

  // Message text: comma-separated items, each evaluated and concatenated.
  // Text that does not evaluate is rendered verbatim.
  std::string render_message(const TokenLine& head);

 private:
  Flow run_block(const ControlProgram& program, const ControlBlock& block);
  Flow run_node(const ControlProgram& program, const ControlNode& node);
  Flow run_conditional(const ControlProgram& program, const ControlNode& node);
  Flow run_while(const ControlProgram& program, const ControlNode& node);
  Flow run_repeat(const ControlProgram& program, const ControlNode& node);
  Flow run_directive_statement(const TokenLine& line, Directive d);
  void count_iteration(std::uint64_t& n, const TokenLine& head) const;

  char prefix_;
  DirectiveHost& host_;
  std::uint64_t loop_cap_;
  int loop_depth_ = 0;
};

}  // namespace gentrans
