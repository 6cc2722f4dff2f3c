#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "gentrans/token.hpp"
#include "gentrans/value.hpp"

namespace gentrans {

// Consulted for names missing from the symbol table (labels in the
// destination phase). Returning nullopt makes the name undefined.
using NameResolver = std::function<std::optional<Value>(std::string_view name, const SourcePos& pos)>;

// Evaluates a complete expression. Precedence, tightest first:
//   unary ! ~ -   * / %   + -   << >>   < <= > >=   = !=   &   ^   |   &&   ||
// `=` is equality here. Relational and logical results are 0 or 1, and
// `&&` / `||` short-circuit.
Value evaluate(std::span<const Token> tokens, const SymbolTable& env, const NameResolver& fallback = {});

// Evaluates the longest expression starting at `cursor` and leaves `cursor`
// on the first token after it. Used for value lists such as `db 1 2, 3`.
Value evaluate_prefix(std::span<const Token> tokens, std::size_t& cursor, const SymbolTable& env,
                      const NameResolver& fallback = {});

}  // namespace gentrans
