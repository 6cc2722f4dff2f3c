#pragma once

#include <string_view>
#include <vector>

#include "gentrans/token.hpp"

namespace gentrans {

enum class LineKind {
  SourceDirective,
  DestDirective,
  ClassDefinition,
  ClassBodyDelimiter,
  Assignment,
  Label,
  DataEmission,
  SymbolSubstitution,
  Blank,
  Plain,
};

const char* to_string(LineKind kind);

// Tokenizes one physical line. `pos` is the position of the first column.
// `//` starts a comment that runs to the end of the line.
TokenSeq tokenize(std::string_view line, const SourcePos& pos);

// Splits `text` on newlines and tokenizes every line; blank lines are kept
// so that line numbers stay meaningful.
std::vector<TokenLine> tokenize_text(std::string_view text, std::string_view file);

LineKind classify_line(std::span<const Token> tokens);
inline LineKind classify_line(const TokenLine& line) { return classify_line(line.span()); }

// True for db/dw/dd/dp/dq/rb/rw/rd/rp/rq.
bool is_data_keyword(std::string_view word);

}  // namespace gentrans
