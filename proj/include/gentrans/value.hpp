#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace gentrans {

// Scalar produced by expression evaluation: a signed 64-bit integer or a
// byte string. Character literals are integers.
class Value {
 public:
  Value() : data_(std::int64_t{0}) {}
  Value(std::int64_t v) : data_(v) {}  // NOLINT(google-explicit-constructor)
  Value(std::string s) : data_(std::move(s)) {}  // NOLINT(google-explicit-constructor)

  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }

  // Integers in decimal, strings verbatim.
  std::string to_display() const;

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<std::int64_t, std::string> data_;
};

// Integer 0 and the empty string are false.
bool truthy(const Value& v);

// Variable bindings with an optional enclosing table.
class SymbolTable {
 public:
  explicit SymbolTable(SymbolTable* parent = nullptr) : parent_(parent) {}

  const Value* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  // Writes to the innermost table that already holds `name`, otherwise
  // creates the binding here.
  void assign(const std::string& name, Value value);
  void erase(std::string_view name);

  const std::map<std::string, Value, std::less<>>& local() const { return bindings_; }

 private:
  SymbolTable* parent_;
  std::map<std::string, Value, std::less<>> bindings_;
};

}  // namespace gentrans
