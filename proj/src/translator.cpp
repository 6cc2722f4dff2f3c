#include "gentrans/translator.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gentrans/expr.hpp"
#include "gentrans/lexer.hpp"

namespace gentrans {

Translation translate_texts(std::span<const SourceText> units, const TranslateOptions& options, DiagnosticLog& log) {
  std::vector<TokenLine> lines;
  for (const SourceText& unit : units) {
    std::vector<TokenLine> part = tokenize_text(unit.text, unit.name);
    lines.insert(lines.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }

  SymbolTable presets;
  for (const auto& [name, v] : options.defines) presets.assign(name, v);

  SymbolTable source_env = presets;
  ClassTable table;
  Translation out;
  out.stream = run_source_phase(lines, source_env, table, log, SourceLimits{options.loop_cap, options.max_depth});

  DestOptions dest;
  dest.emit = EmitOptions{options.endian, options.strict_overflow};
  dest.loop_cap = options.loop_cap;
  dest.guard_rounds = options.guard_rounds;
  out.image = run_dest_phase(out.stream, presets, log, dest);
  return out;
}

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::Ok: return 0;
    case RunStatus::UserError: return 1;
    case RunStatus::InternalError: return 2;
  }
  return 2;
}

namespace {

SourceText read_unit(const std::string& path, std::istream& in) {
  std::ostringstream text;
  if (path == "-") {
    text << in.rdbuf();
    return SourceText{"<stdin>", text.str()};
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Config, "cannot read '" + path + "'");
  text << file.rdbuf();
  return SourceText{path, text.str()};
}

void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path == "-") {
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::Config, "cannot write '" + path + "'");
  file.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!file) throw Error(ErrorKind::Config, "failed writing '" + path + "'");
}

}  // namespace

RunReport translate(const TranslatorConfig& config, std::istream& in, std::ostream& out,
                    const DiagnosticLog::Listener& listener) {
  DiagnosticLog log;
  log.set_listener(listener);
  RunReport report;
  try {
    std::vector<SourceText> units;
    for (const std::string& path : config.rule_files) units.push_back(read_unit(path, in));
    units.push_back(read_unit(config.source_file, in));

    Translation t = translate_texts(units, config.options, log);
    write_output(config.output_path, format_output(t.image, config.format), out);
    report.byte_count = t.image.bytes.size();
  } catch (const Error& e) {
    // #error / @error messages are already in the log.
    if (e.kind() != ErrorKind::User) log.error(0, e.describe(), {});
    report.status = e.kind() == ErrorKind::Internal ? RunStatus::InternalError : RunStatus::UserError;
  } catch (const std::exception& e) {
    log.error(0, std::string("internal error: ") + e.what(), {});
    report.status = RunStatus::InternalError;
  }
  report.diagnostics = log.rendered();
  return report;
}

// ---------------------------------------------------------------------------
// Output formats

namespace {

std::string hex_byte(std::uint8_t b) {
  static constexpr char digits[] = "0123456789ABCDEF";
  return {digits[b >> 4], digits[b & 15]};
}

std::string hex_offset(std::size_t offset) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%08zX", offset);
  return buf;
}

std::string hex_dump(std::span<const std::uint8_t> bytes) {
  std::string out;
  for (std::size_t row = 0; row < bytes.size(); row += 16) {
    const std::size_t n = std::min<std::size_t>(16, bytes.size() - row);
    std::string hex;
    std::string ascii;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t b = bytes[row + i];
      if (i) hex += ' ';
      hex += hex_byte(b);
      ascii += (b >= 0x20 && b < 0x7f) ? static_cast<char>(b) : '.';
    }
    hex.resize(16 * 3 - 1, ' ');
    out += hex_offset(row) + ": " + hex + "  |" + ascii + "|\n";
  }
  return out;
}

std::string listing(const EmitImage& image) {
  constexpr std::size_t kPerLine = 8;
  std::ostringstream out;
  for (const ListingEntry& e : image.listing) {
    std::size_t done = 0;
    do {
      const std::size_t n = std::min(kPerLine, e.size - done);
      std::string hex;
      for (std::size_t i = 0; i < n; ++i) {
        if (i) hex += ' ';
        hex += hex_byte(image.bytes[e.offset + done + i]);
      }
      hex.resize(kPerLine * 3 - 1, ' ');
      out << hex_offset(e.offset + done) << "  " << hex;
      if (done == 0) out << "  " << e.source;
      out << '\n';
      done += n;
    } while (done < e.size);
  }
  if (!image.labels.empty()) {
    out << "\nlabels:\n";
    for (const auto& [name, offset] : image.labels) {
      out << "  " << hex_offset(static_cast<std::size_t>(offset)) << "  " << name << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::string format_output(const EmitImage& image, OutputFormat format) {
  switch (format) {
    case OutputFormat::Raw: return std::string(image.bytes.begin(), image.bytes.end());
    case OutputFormat::Hex: return hex_dump(image.bytes);
    case OutputFormat::Listing: return listing(image);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Command line

namespace {

std::pair<std::string, Value> parse_define(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Config, "--define expects NAME=VALUE, got '" + spec + "'");
  std::string name = spec.substr(0, eq);
  std::string text = spec.substr(eq + 1);
  TokenSeq tokens = tokenize(name, SourcePos{"--define", 1, 1});
  if (tokens.size() != 1 || !tokens[0].is_ident()) throw Error(ErrorKind::Config, "--define name '" + name + "' is not an identifier");
  // Integers, character and string literals, or constant expressions;
  // anything else is taken as a string.
  try {
    TokenSeq value = tokenize(text, SourcePos{"--define", 1, 1});
    if (!value.empty()) return {name, evaluate(value, SymbolTable{})};
  } catch (const Error&) {
  }
  return {name, Value(text)};
}

}  // namespace

TranslatorConfig parse_args(int argc, const char* const* argv) {
  TranslatorConfig config;
  CLI::App app{"Two-level general translator: class rules and directives to bytes", "gentrans"};
  app.set_help_flag("-h,--help", "Show this help and exit");

  std::string format = "raw";
  std::string endian = "little";
  std::vector<std::string> defines;
  app.add_option("--rules", config.rule_files, "Rule file, processed before the source (repeatable)")
      ->take_all()
      ->allow_extra_args(false);
  app.add_option("--in", config.source_file, "Source file, or - for standard input")->required();
  app.add_option("--out", config.output_path, "Output file, or - for standard output")->capture_default_str();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"raw", "hex", "listing"}))->capture_default_str();
  app.add_option("--endian", endian, "Byte order of multi-byte units")->check(CLI::IsMember({"little", "big"}))->capture_default_str();
  app.add_option("--define", defines, "Preset variable NAME=VALUE for both levels (repeatable)")->allow_extra_args(false);
  app.add_option("--max-loop", config.options.loop_cap, "Iteration cap for every loop")->capture_default_str();
  app.add_option("--max-depth", config.options.max_depth, "Class expansion depth limit")->capture_default_str();
  app.add_flag("--strict-overflow", config.options.strict_overflow, "Reject values that do not fit their unit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::Config, e.what());
  }

  config.format = format == "hex" ? OutputFormat::Hex : format == "listing" ? OutputFormat::Listing : OutputFormat::Raw;
  config.options.endian = endian == "big" ? Endian::Big : Endian::Little;
  for (const std::string& d : defines) config.options.defines.push_back(parse_define(d));
  if (config.options.loop_cap == 0) throw Error(ErrorKind::Config, "--max-loop must be positive");
  if (config.options.max_depth == 0) throw Error(ErrorKind::Config, "--max-depth must be positive");
  return config;
}

}  // namespace gentrans
