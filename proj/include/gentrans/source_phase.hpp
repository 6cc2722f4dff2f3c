#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gentrans/classes.hpp"
#include "gentrans/diagnostics.hpp"
#include "gentrans/token.hpp"
#include "gentrans/value.hpp"

namespace gentrans {

// The `#`-free lines handed from the source level to the destination level.
struct IntermediateStream {
  std::vector<TokenLine> lines;
};

struct SourceLimits {
  std::uint64_t loop_cap = 1'000'000;
  std::size_t max_depth = 1024;
};

// First processing level.
//
// Lines are handled in order. `#` directives steer control flow, `class`
// definitions are registered where they appear, `name := tokens` records a
// symbol substitution, and every other line is offered to class resolution:
// first by its leading name, then as in-line functional invocations
// (`INC(4)` inside `db INC(4)`), and finally through symbol substitution.
// Expansions are processed again as source lines. What survives is appended
// to the intermediate stream.
//
// Assignments `name = expr` are evaluated into `env` when they can be (so
// `#` conditions can test them) and always pass through as well.
IntermediateStream run_source_phase(std::span<const TokenLine> lines, SymbolTable& env, ClassTable& table,
                                    DiagnosticLog& log, const SourceLimits& limits = {});

}  // namespace gentrans
