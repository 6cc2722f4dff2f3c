#include "gentrans/expr.hpp"

#include <limits>

namespace gentrans {

std::string Value::to_display() const {
  if (is_int()) return std::to_string(as_int());
  return as_string();
}

bool truthy(const Value& v) {
  if (v.is_int()) return v.as_int() != 0;
  return !v.as_string().empty();
}

const Value* SymbolTable::find(std::string_view name) const {
  for (const SymbolTable* t = this; t != nullptr; t = t->parent_) {
    auto it = t->bindings_.find(name);
    if (it != t->bindings_.end()) return &it->second;
  }
  return nullptr;
}

void SymbolTable::assign(const std::string& name, Value value) {
  for (SymbolTable* t = this; t != nullptr; t = t->parent_) {
    auto it = t->bindings_.find(name);
    if (it != t->bindings_.end()) {
      it->second = std::move(value);
      return;
    }
  }
  bindings_.insert_or_assign(name, std::move(value));
}

void SymbolTable::erase(std::string_view name) {
  auto it = bindings_.find(name);
  if (it != bindings_.end()) bindings_.erase(it);
}

namespace {

enum class BinOp { Or, And, BitOr, BitXor, BitAnd, Eq, Ne, Lt, Le, Gt, Ge, Shl, Shr, Add, Sub, Mul, Div, Mod };

struct BinInfo {
  BinOp op;
  int prec;
};

std::optional<BinInfo> binary_info(const Token& t) {
  if (t.kind != TokenKind::Operator) return std::nullopt;
  std::string_view s = t.symbol();
  if (s == "||") return BinInfo{BinOp::Or, 1};
  if (s == "&&") return BinInfo{BinOp::And, 2};
  if (s == "|") return BinInfo{BinOp::BitOr, 3};
  if (s == "^") return BinInfo{BinOp::BitXor, 4};
  if (s == "&") return BinInfo{BinOp::BitAnd, 5};
  if (s == "=") return BinInfo{BinOp::Eq, 6};
  if (s == "!=") return BinInfo{BinOp::Ne, 6};
  if (s == "<") return BinInfo{BinOp::Lt, 7};
  if (s == "<=") return BinInfo{BinOp::Le, 7};
  if (s == ">") return BinInfo{BinOp::Gt, 7};
  if (s == ">=") return BinInfo{BinOp::Ge, 7};
  if (s == "<<") return BinInfo{BinOp::Shl, 8};
  if (s == ">>") return BinInfo{BinOp::Shr, 8};
  if (s == "+") return BinInfo{BinOp::Add, 9};
  if (s == "-") return BinInfo{BinOp::Sub, 9};
  if (s == "*") return BinInfo{BinOp::Mul, 10};
  if (s == "/") return BinInfo{BinOp::Div, 10};
  if (s == "%") return BinInfo{BinOp::Mod, 10};
  return std::nullopt;
}

std::int64_t wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }
std::uint64_t bits(std::int64_t v) { return static_cast<std::uint64_t>(v); }

class Evaluator {
 public:
  Evaluator(std::span<const Token> tokens, std::size_t cursor, const SymbolTable& env, const NameResolver& fallback)
      : tokens_(tokens), i_(cursor), env_(env), fallback_(fallback) {}

  Value expression() { return binary(1, true); }
  std::size_t cursor() const { return i_; }

  [[noreturn]] void fail(const std::string& what, const SourcePos& pos) const {
    throw Error(ErrorKind::Evaluation, what, pos);
  }

  // Malformed input, as opposed to a well-formed expression without a value.
  [[noreturn]] void malformed(const std::string& what, const SourcePos& pos) const {
    throw Error(ErrorKind::Syntax, what, pos);
  }

  SourcePos here() const {
    if (i_ < tokens_.size()) return tokens_[i_].pos;
    if (!tokens_.empty()) return tokens_.back().pos;
    return {};
  }

 private:
  bool at_end() const { return i_ >= tokens_.size(); }

  // `live` is false while parsing the skipped side of && / ||.
  Value binary(int min_prec, bool live) {
    Value lhs = unary(live);
    while (!at_end()) {
      auto info = binary_info(tokens_[i_]);
      if (!info || info->prec < min_prec) break;
      const Token& op = tokens_[i_++];
      if (info->op == BinOp::And || info->op == BinOp::Or) {
        bool left = live && truthy(lhs);
        bool decided = info->op == BinOp::And ? !left : left;
        Value rhs = binary(info->prec + 1, live && !decided);
        if (!live) continue;
        lhs = decided ? Value(std::int64_t{left}) : Value(std::int64_t{truthy(rhs)});
        continue;
      }
      Value rhs = binary(info->prec + 1, live);
      if (live) lhs = apply(info->op, lhs, rhs, op);
    }
    return lhs;
  }

  Value unary(bool live) {
    if (at_end()) malformed("expected expression", here());
    const Token& t = tokens_[i_];
    if (t.is_op("!") || t.is_op("~") || t.is_op("-")) {
      ++i_;
      Value v = unary(live);
      if (!live) return Value{};
      if (t.is_op("!")) return Value(std::int64_t{!truthy(v)});
      if (!v.is_int()) fail("operator '" + t.text + "' needs an integer operand", t.pos);
      if (t.is_op("~")) return Value(~v.as_int());
      return Value(wrap(0 - bits(v.as_int())));
    }
    return primary(live);
  }

  Value primary(bool live) {
    const Token& t = tokens_[i_];
    switch (t.kind) {
      case TokenKind::Integer:
        ++i_;
        return Value(t.number);
      case TokenKind::String:
        ++i_;
        return Value(t.string_value());
      case TokenKind::Identifier: {
        std::string name = read_dotted_name(tokens_, i_);
        if (!live) return Value{};
        if (const Value* v = env_.find(name)) return *v;
        if (fallback_) {
          if (auto v = fallback_(name, t.pos)) return *v;
        }
        fail("undefined identifier '" + name + "'", t.pos);
      }
      case TokenKind::Punctuation:
        if (t.is_punct("(")) {
          ++i_;
          Value v = binary(1, live);
          if (at_end() || !tokens_[i_].is_punct(")")) malformed("missing ')'", here());
          ++i_;
          return v;
        }
        break;
      default:
        break;
    }
    malformed("unexpected '" + t.text + "' in expression", t.pos);
  }

  Value apply(BinOp op, const Value& a, const Value& b, const Token& at) const {
    if (a.is_string() || b.is_string()) return apply_strings(op, a, b, at);
    const std::int64_t x = a.as_int();
    const std::int64_t y = b.as_int();
    switch (op) {
      case BinOp::BitOr: return Value(x | y);
      case BinOp::BitXor: return Value(x ^ y);
      case BinOp::BitAnd: return Value(x & y);
      case BinOp::Eq: return Value(std::int64_t{x == y});
      case BinOp::Ne: return Value(std::int64_t{x != y});
      case BinOp::Lt: return Value(std::int64_t{x < y});
      case BinOp::Le: return Value(std::int64_t{x <= y});
      case BinOp::Gt: return Value(std::int64_t{x > y});
      case BinOp::Ge: return Value(std::int64_t{x >= y});
      case BinOp::Shl:
      case BinOp::Shr:
        if (y < 0 || y >= 64) fail("shift amount " + std::to_string(y) + " is outside 0..63", at.pos);
        return op == BinOp::Shl ? Value(wrap(bits(x) << y)) : Value(x >> y);
      case BinOp::Add: return Value(wrap(bits(x) + bits(y)));
      case BinOp::Sub: return Value(wrap(bits(x) - bits(y)));
      case BinOp::Mul: return Value(wrap(bits(x) * bits(y)));
      case BinOp::Div:
      case BinOp::Mod:
        if (y == 0) fail(op == BinOp::Div ? "division by zero" : "modulo by zero", at.pos);
        if (x == std::numeric_limits<std::int64_t>::min() && y == -1) {
          return op == BinOp::Div ? Value(x) : Value(std::int64_t{0});
        }
        return op == BinOp::Div ? Value(x / y) : Value(x % y);
      case BinOp::And:
      case BinOp::Or:
        break;
    }
    fail("unsupported operator", at.pos);
  }

  Value apply_strings(BinOp op, const Value& a, const Value& b, const Token& at) const {
    if (a.is_string() && b.is_string()) {
      if (op == BinOp::Add) return Value(a.as_string() + b.as_string());
      if (op == BinOp::Eq) return Value(std::int64_t{a.as_string() == b.as_string()});
      if (op == BinOp::Ne) return Value(std::int64_t{a.as_string() != b.as_string()});
      fail("operator '" + at.text + "' is not defined on strings", at.pos);
    }
    fail("type mismatch: operator '" + at.text + "' mixes a string and an integer", at.pos);
  }

  std::span<const Token> tokens_;
  std::size_t i_;
  const SymbolTable& env_;
  const NameResolver& fallback_;
};

}  // namespace

Value evaluate(std::span<const Token> tokens, const SymbolTable& env, const NameResolver& fallback) {
  Evaluator e(tokens, 0, env, fallback);
  if (tokens.empty()) e.malformed("expected expression", {});
  Value v = e.expression();
  if (e.cursor() != tokens.size()) {
    e.malformed("unexpected '" + tokens[e.cursor()].text + "' after expression", tokens[e.cursor()].pos);
  }
  return v;
}

Value evaluate_prefix(std::span<const Token> tokens, std::size_t& cursor, const SymbolTable& env,
                      const NameResolver& fallback) {
  Evaluator e(tokens, cursor, env, fallback);
  Value v = e.expression();
  cursor = e.cursor();
  return v;
}

}  // namespace gentrans
