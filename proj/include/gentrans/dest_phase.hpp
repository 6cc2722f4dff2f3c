#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>

#include "gentrans/diagnostics.hpp"
#include "gentrans/emit.hpp"
#include "gentrans/source_phase.hpp"
#include "gentrans/value.hpp"

namespace gentrans {

struct DestOptions {
  EmitOptions emit;
  std::uint64_t loop_cap = 1'000'000;
  // Rounds allowed for guard elimination; 0 means number of guards + 1.
  std::size_t guard_rounds = 0;
  // Passes allowed for label values to settle.
  std::size_t label_passes = 16;
};

struct GuardResolution {
  std::set<std::string> included;
  std::set<std::string> excluded;
  std::size_t rounds = 0;
};

// Second processing level: `@` directives, assignments, labels and data
// emission into an image.
//
// A block `@if [P] ... @endif` is a guarded procedure: it survives only
// while the name P is used somewhere outside the block itself. Guards start
// out included; each round drops the guards nothing surviving refers to,
// until no further guard drops. Forward label references are settled by
// re-running the level until label values stop changing.
//
// `presets` seeds the variables; every pass starts from a copy. `@print`
// output of the final pass goes to `log`.
EmitImage run_dest_phase(const IntermediateStream& stream, const SymbolTable& presets, DiagnosticLog& log,
                         const DestOptions& options = {});

// The guard inclusion fixed point for `stream`, without keeping the image.
GuardResolution resolve_guarded_procedures(const IntermediateStream& stream, const SymbolTable& presets,
                                           const DestOptions& options = {});

}  // namespace gentrans
