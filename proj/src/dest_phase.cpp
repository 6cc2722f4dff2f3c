#include "gentrans/dest_phase.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "gentrans/directives.hpp"
#include "gentrans/expr.hpp"
#include "gentrans/lexer.hpp"

namespace gentrans {

namespace {

using LabelMap = std::map<std::string, std::int64_t>;

// `@if [name]` names a guarded procedure.
std::optional<std::string> guard_name(const TokenLine& head) {
  if (directive_of(head[0], '@') != Directive::If) return std::nullopt;
  std::span<const Token> args = head.span(1);
  if (args.size() < 3 || !args.front().is_punct("[") || !args.back().is_punct("]")) return std::nullopt;
  std::size_t i = 1;
  std::string name = read_dotted_name(args, i);
  if (name.empty() || i != args.size() - 1) return std::nullopt;
  return name;
}

struct PassSetup {
  const std::set<std::string>* excluded = nullptr;
  const LabelMap* known = nullptr;  // label values from the previous pass
  bool provisional = true;          // unknown names read as 0 instead of failing
};

struct PassResult {
  EmitImage image;
  std::set<std::string> guards;      // guards met during the pass
  std::set<std::string> referenced;  // names used outside their own guard
  std::vector<Diagnostic> messages;
  bool unresolved = false;
};

class DestPass final : public DirectiveHost {
 public:
  DestPass(const IntermediateStream& stream, const SymbolTable& presets, const DestOptions& options, PassSetup setup)
      : stream_(stream), options_(options), setup_(setup), engine_('@', *this, options.loop_cap) {
    for (const auto& [name, v] : presets.local()) env_.assign(name, v);
    resolver_ = [this](std::string_view name, const SourcePos&) -> std::optional<Value> {
      if (auto it = result_.image.labels.find(std::string(name)); it != result_.image.labels.end()) return it->second;
      if (auto it = setup_.known->find(std::string(name)); it != setup_.known->end()) return it->second;
      if (!setup_.provisional) return std::nullopt;
      result_.unresolved = true;
      return Value(std::int64_t{0});
    };
  }

  PassResult run() {
    ControlProgram program = parse_control(stream_.lines, '@');
    engine_.run(program);
    for (const auto& [name, offset] : result_.image.labels) {
      if (result_.referenced.contains(name)) result_.image.references.insert(name);
    }
    return std::move(result_);
  }

  // Messages written before a failure, so they can still be reported.
  std::vector<Diagnostic> take_messages() { return std::move(result_.messages); }

  Flow statement(std::span<const TokenLine> lines) override {
    const TokenLine& line = lines.front();
    switch (classify_line(line)) {
      case LineKind::Blank:
        break;
      case LineKind::Label:
        label(line);
        break;
      case LineKind::Assignment:
        assignment(line);
        break;
      case LineKind::DataEmission:
        data(line);
        break;
      case LineKind::DestDirective:
        throw Error(ErrorKind::Syntax, "unknown directive '" + line[0].text + "'", line.pos);
      case LineKind::SourceDirective:
      case LineKind::ClassDefinition:
      case LineKind::ClassBodyDelimiter:
      case LineKind::SymbolSubstitution:
        throw Error(ErrorKind::Syntax, "'" + render(line) + "' is not valid at the destination level", line.pos);
      case LineKind::Plain:
        throw Error(ErrorKind::Syntax, "no rule matches '" + render(line) + "'", line.pos);
    }
    return Flow::normal();
  }

  Value value(const TokenLine& /*head*/, std::span<const Token> expr) override {
    note_references(expr);
    return evaluate(expr, env_, resolver_);
  }

  bool condition(const TokenLine& head, std::span<const Token> expr) override {
    if (auto guard = guard_name(head)) {
      result_.guards.insert(*guard);
      return !setup_.excluded->contains(*guard);
    }
    return truthy(value(head, expr));
  }

  void enter_branch(const TokenLine& head) override {
    if (auto guard = guard_name(head)) active_guards_.push_back(*guard);
  }

  void leave_branch(const TokenLine& head) override {
    if (guard_name(head)) active_guards_.pop_back();
  }

  void print(const TokenLine& head, const std::string& text) override {
    result_.messages.push_back(Diagnostic{Diagnostic::Kind::Print, '@', text, head.pos});
  }

  [[noreturn]] void raise(const TokenLine& head, const std::string& text) override {
    result_.messages.push_back(Diagnostic{Diagnostic::Kind::Error, '@', text, head.pos});
    throw Error(ErrorKind::User, text, head.pos);
  }

 private:
  void note_references(std::span<const Token> tokens) {
    for (std::size_t i = 0; i < tokens.size();) {
      std::string name = read_dotted_name(tokens, i);
      if (name.empty()) {
        ++i;
        continue;
      }
      if (std::find(active_guards_.begin(), active_guards_.end(), name) == active_guards_.end()) {
        result_.referenced.insert(std::move(name));
      }
    }
  }

  void listing(const TokenLine& line, std::size_t offset) {
    result_.image.listing.push_back(ListingEntry{offset, result_.image.cursor() - offset, render(line), line.pos});
  }

  void label(const TokenLine& line) {
    std::size_t i = 0;
    define_label(result_.image, read_dotted_name(line.span(), i), line.pos);
    listing(line, result_.image.cursor());
  }

  void assignment(const TokenLine& line) {
    std::size_t i = 0;
    const std::string name = read_dotted_name(line.span(), i);
    env_.assign(name, value(line, line.span(i + 1)));
  }

  void data(const TokenLine& line) {
    std::span<const Token> tokens = line.span();
    std::size_t i = 0;
    std::string name;
    if (!is_data_keyword(tokens[0].text) || (tokens.size() > 1 && tokens[1].is_op("."))) {
      name = read_dotted_name(tokens, i);
    } else if (tokens.size() > 1 && tokens[1].is_ident() && is_data_keyword(tokens[1].text)) {
      name = tokens[i++].text;  // `db dw 1`: a datum named db
    }
    const std::size_t offset = result_.image.cursor();
    if (!name.empty()) define_label(result_.image, name, line.pos);

    const std::string& keyword = tokens[i].text;
    const SizeCode code = *size_code_from_letter(keyword[1]);
    std::span<const Token> args = tokens.subspan(i + 1);
    note_references(args);
    if (keyword[0] == 'd') {
      std::vector<DataItem> values = data_values(line, keyword, args);
      emit_data(result_.image, code, values, options_.emit, line.pos);
    } else {
      reserve(line, keyword, code, args);
    }
    listing(line, offset);
  }

  std::vector<DataItem> data_values(const TokenLine& line, const std::string& keyword, std::span<const Token> args) {
    std::vector<DataItem> values;
    std::size_t i = 0;
    while (i < args.size()) {
      if (args[i].is_op("?")) {
        values.emplace_back(std::nullopt);
        ++i;
      } else {
        values.emplace_back(evaluate_prefix(args, i, env_, resolver_));
      }
      if (i < args.size() && args[i].is_punct(",")) {
        ++i;
        if (i == args.size()) throw Error(ErrorKind::Syntax, "trailing ',' in " + keyword + " list", line.pos);
      }
    }
    if (values.empty()) throw Error(ErrorKind::Syntax, keyword + " needs at least one value", line.pos);
    return values;
  }

  void reserve(const TokenLine& line, const std::string& keyword, SizeCode code, std::span<const Token> args) {
    if (args.empty()) throw Error(ErrorKind::Syntax, keyword + " needs a unit count", line.pos);
    std::size_t i = 0;
    Value count = evaluate_prefix(args, i, env_, resolver_);
    if (!count.is_int()) throw Error(ErrorKind::Evaluation, keyword + " count must be an integer", line.pos);
    std::optional<Value> fill;
    if (i < args.size() && args[i].is_punct(",")) ++i;
    if (i < args.size()) fill = evaluate_prefix(args, i, env_, resolver_);
    if (i != args.size()) {
      throw Error(ErrorKind::Syntax, "unexpected '" + args[i].text + "' after " + keyword + " fill value", args[i].pos);
    }
    reserve_data(result_.image, code, count.as_int(), fill, options_.emit, line.pos);
  }

  const IntermediateStream& stream_;
  const DestOptions& options_;
  PassSetup setup_;
  DirectiveEngine engine_;
  SymbolTable env_;
  NameResolver resolver_;
  std::vector<std::string> active_guards_;
  PassResult result_;
};

PassResult run_pass(const IntermediateStream& stream, const SymbolTable& presets, const DestOptions& options,
                    PassSetup setup, DiagnosticLog* log_on_failure) {
  DestPass pass(stream, presets, options, setup);
  try {
    return pass.run();
  } catch (const Error&) {
    if (log_on_failure) {
      for (Diagnostic& d : pass.take_messages()) log_on_failure->add(std::move(d));
    }
    throw;
  }
}

// Re-runs the level until label values stop moving.
PassResult settle_labels(const IntermediateStream& stream, const SymbolTable& presets, const DestOptions& options,
                         const std::set<std::string>& excluded, DiagnosticLog* log) {
  LabelMap known;
  for (std::size_t pass = 0; pass < std::max<std::size_t>(options.label_passes, 1); ++pass) {
    PassResult r = run_pass(stream, presets, options, PassSetup{&excluded, &known, true}, log);
    if (r.image.labels == known) {
      // A name that is still unknown once labels are stable is undefined;
      // a strict pass reports it at its use.
      if (r.unresolved) return run_pass(stream, presets, options, PassSetup{&excluded, &known, false}, log);
      return r;
    }
    known = r.image.labels;
  }
  throw Error(ErrorKind::Evaluation,
              "label values did not settle after " + std::to_string(options.label_passes) + " passes");
}

struct GuardedRun {
  PassResult result;
  GuardResolution guards;
};

GuardedRun run_guarded(const IntermediateStream& stream, const SymbolTable& presets, const DestOptions& options,
                       DiagnosticLog* log) {
  GuardResolution res;
  std::set<std::string> all_guards;
  while (true) {
    ++res.rounds;
    PassResult r = settle_labels(stream, presets, options, res.excluded, log);
    all_guards.insert(r.guards.begin(), r.guards.end());
    std::vector<std::string> dropped;
    for (const std::string& g : r.guards) {
      if (!r.referenced.contains(g) && !res.excluded.contains(g)) dropped.push_back(g);
    }
    if (dropped.empty()) {
      for (const std::string& g : all_guards) {
        if (!res.excluded.contains(g)) res.included.insert(g);
      }
      return GuardedRun{std::move(r), std::move(res)};
    }
    res.excluded.insert(dropped.begin(), dropped.end());
    const std::size_t bound = options.guard_rounds != 0 ? options.guard_rounds : all_guards.size() + 1;
    if (res.rounds >= bound) {
      throw Error(ErrorKind::Internal,
                  "guarded procedure elimination did not reach a fixed point in " + std::to_string(bound) + " rounds");
    }
  }
}

}  // namespace

EmitImage run_dest_phase(const IntermediateStream& stream, const SymbolTable& presets, DiagnosticLog& log,
                         const DestOptions& options) {
  GuardedRun run = run_guarded(stream, presets, options, &log);
  for (Diagnostic& d : run.result.messages) log.add(std::move(d));
  return std::move(run.result.image);
}

GuardResolution resolve_guarded_procedures(const IntermediateStream& stream, const SymbolTable& presets,
                                           const DestOptions& options) {
  return run_guarded(stream, presets, options, nullptr).guards;
}

}  // namespace gentrans
