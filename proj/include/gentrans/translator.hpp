#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gentrans/dest_phase.hpp"
#include "gentrans/diagnostics.hpp"
#include "gentrans/emit.hpp"
#include "gentrans/source_phase.hpp"
#include "gentrans/value.hpp"

namespace gentrans {

enum class OutputFormat { Raw, Hex, Listing };

struct TranslateOptions {
  Endian endian = Endian::Little;
  bool strict_overflow = false;
  // Preset variables for both levels.
  std::vector<std::pair<std::string, Value>> defines;
  std::uint64_t loop_cap = 1'000'000;
  std::size_t max_depth = 1024;
  std::size_t guard_rounds = 0;
};

// Everything a run needs: rule files first (in order), then the source, all
// read as one translation unit.
struct TranslatorConfig {
  std::vector<std::string> rule_files;
  std::string source_file;          // "-" reads standard input
  std::string output_path = "-";    // "-" writes standard output
  OutputFormat format = OutputFormat::Raw;
  TranslateOptions options;
};

struct SourceText {
  std::string name;
  std::string text;
};

struct Translation {
  IntermediateStream stream;
  EmitImage image;
};

// Runs both levels over the concatenated texts. Diagnostics go to `log`,
// also when an Error escapes.
Translation translate_texts(std::span<const SourceText> units, const TranslateOptions& options, DiagnosticLog& log);

enum class RunStatus { Ok, UserError, InternalError };

struct RunReport {
  RunStatus status = RunStatus::Ok;
  std::size_t byte_count = 0;
  std::vector<std::string> diagnostics;
};

// 0 for Ok, 1 for UserError, 2 for InternalError.
int exit_code(RunStatus status);

// Reads the configured files, translates and writes the output. Nothing is
// written unless the run succeeds. `in`/`out` stand for "-" paths; the
// listener sees each diagnostic as it happens.
RunReport translate(const TranslatorConfig& config, std::istream& in, std::ostream& out,
                    const DiagnosticLog::Listener& listener = {});

// raw: the bytes. hex: 16 bytes per line as `OFFSET: HH HH ...  |ascii|`.
// listing: offsets and bytes next to the lines that produced them, then
// the label table.
std::string format_output(const EmitImage& image, OutputFormat format);

// Thrown by parse_args for --help.
struct HelpRequested {
  std::string text;
};

// Flags: --rules (repeatable), --in, --out, --format raw|hex|listing,
// --endian little|big, --define NAME=VALUE (repeatable), --max-loop,
// --max-depth, --strict-overflow. Usage faults throw Error(Config).
TranslatorConfig parse_args(int argc, const char* const* argv);

}  // namespace gentrans
