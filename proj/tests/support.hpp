#pragma once

// Helpers shared by the unit and acceptance suites.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gentrans/classes.hpp"
#include "gentrans/dest_phase.hpp"
#include "gentrans/diagnostics.hpp"
#include "gentrans/lexer.hpp"
#include "gentrans/source_phase.hpp"
#include "gentrans/translator.hpp"

namespace gentrans::testing {

inline std::vector<TokenLine> lines_of(std::string_view text, std::string_view file = "test") {
  return tokenize_text(text, file);
}

inline TokenSeq toks(std::string_view text) { return tokenize(text, SourcePos{"test", 1, 1}); }

struct SourceRun {
  IntermediateStream stream;
  ClassTable table;
  SymbolTable env;
  DiagnosticLog log;

  std::vector<std::string> rendered() const {
    std::vector<std::string> out;
    for (const TokenLine& l : stream.lines) out.push_back(render(l));
    return out;
  }
  std::vector<std::string> prints() const {
    std::vector<std::string> out;
    for (const Diagnostic& d : log.entries()) out.push_back(d.text);
    return out;
  }
};

inline SourceRun run_source(std::string_view text, const SourceLimits& limits = {}) {
  SourceRun run;
  std::vector<TokenLine> lines = lines_of(text);
  run.stream = run_source_phase(lines, run.env, run.table, run.log, limits);
  return run;
}

inline IntermediateStream stream_of(std::string_view text) { return IntermediateStream{lines_of(text)}; }

struct DestRun {
  EmitImage image;
  DiagnosticLog log;
};

inline DestRun run_dest(std::string_view text, const DestOptions& options = {}) {
  DestRun run;
  run.image = run_dest_phase(stream_of(text), SymbolTable{}, run.log, options);
  return run;
}

struct FullRun {
  Translation result;
  DiagnosticLog log;
};

inline FullRun run_all(std::string_view rules, std::string_view source, const TranslateOptions& options = {}) {
  FullRun run;
  std::vector<SourceText> units;
  if (!rules.empty()) units.push_back(SourceText{"rules.gt", std::string(rules)});
  units.push_back(SourceText{"source.src", std::string(source)});
  run.result = translate_texts(units, options, run.log);
  return run;
}

inline std::vector<std::uint8_t> bytes_of(std::string_view rules, std::string_view source,
                                          const TranslateOptions& options = {}) {
  return run_all(rules, source, options).result.image.bytes;
}

inline std::vector<std::uint8_t> bytes(std::initializer_list<int> values) {
  std::vector<std::uint8_t> out;
  for (int v : values) out.push_back(static_cast<std::uint8_t>(v));
  return out;
}

inline std::vector<std::uint8_t> bytes(std::string_view text) {
  return std::vector<std::uint8_t>(text.begin(), text.end());
}

}  // namespace gentrans::testing
