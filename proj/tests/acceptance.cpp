// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gentrans/error.hpp"
#include "gentrans/expr.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gentrans;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and sample counts.
constexpr double kNopRuntimeLimitSeconds = 1.0;
constexpr int kSplitSamples = 200;
constexpr int kEngineSamples = 100;
constexpr int kEmissionSamples = 500;
constexpr int kExprSamples = 1000;
constexpr int kExprDepth = 4;
constexpr int kGuardSamples = 300;
constexpr std::size_t kMaxGuards = 3;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string hex(const std::vector<std::uint8_t>& bytes) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    char buf[4];
    std::snprintf(buf, sizeof buf, "%02X", bytes[i]);
    out << (i ? " " : "") << buf;
  }
  return out.str() + "]";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Failure("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const fs::path kSamples = GENTRANS_SAMPLES_DIR;

// A sample source names its rule files on a first-line `// rules:` comment.
std::vector<SourceText> sample_units(const std::string& source, std::vector<std::string> rules = {}) {
  const std::string text = read_file(kSamples / source);
  const std::string marker = "// rules:";
  if (rules.empty() && text.rfind(marker, 0) == 0) {
    std::istringstream names(text.substr(marker.size(), text.find('\n') - marker.size()));
    for (std::string n; names >> n;) rules.push_back(n);
  }
  std::vector<SourceText> units;
  for (const std::string& r : rules) units.push_back(SourceText{r, read_file(kSamples / r)});
  units.push_back(SourceText{source, text});
  return units;
}

struct Outcome {
  std::vector<std::uint8_t> bytes;
  std::vector<std::string> diagnostics;
};

Outcome run_units(const std::vector<SourceText>& units, const TranslateOptions& options = {}) {
  DiagnosticLog log;
  Outcome o;
  o.bytes = translate_texts(units, options, log).image.bytes;
  o.diagnostics = log.rendered();
  return o;
}

ClassTable table_of(std::string_view text) {
  ClassTable table;
  std::vector<TokenLine> lines = tokenize_text(text, "rules");
  for (std::size_t i = 0; i < lines.size();) {
    if (lines[i].empty()) {
      ++i;
      continue;
    }
    ClassSource src = read_class_source(std::span<const TokenLine>(lines).subspan(i));
    define_class(src.header, std::move(src.body), std::move(src.aliases), table);
    i += src.line_count;
  }
  return table;
}

TokenSeq toks(std::string_view text) { return gentrans::testing::toks(text); }

const char* kETable =
    "class E x {x}\n"
    "class E x * y {E(x)*E(y)}\n"
    "class E x + y {E(x)+E(y)}\n";

// Fully resolves an E expression and returns its nesting, reading each
// expanded body as `E ( ... )` calls joined by operators.
std::string nest(std::span<const Token> args, const ClassTable& table, int depth = 0) {
  expect(depth < 64, "nesting too deep");
  auto r = resolve("E", args, table);
  expect(r.has_value(), "E did not resolve " + render(args));
  if (r->def->params().size() == 1) return render(args);
  std::vector<TokenLine> body = expand(*r->def, r->binding);
  const TokenSeq& t = body.at(0).tokens;
  std::string out = "(";
  for (std::size_t i = 0; i < t.size();) {
    if (t[i].text == "E" && i + 1 < t.size() && t[i + 1].is_punct("(")) {
      std::size_t j = i + 2;
      for (int level = 1; j < t.size(); ++j) {
        if (t[j].is_punct("(")) ++level;
        if (t[j].is_punct(")") && --level == 0) break;
      }
      out += nest(std::span<const Token>(t).subspan(i + 2, j - i - 2), table, depth + 1);
      i = j + 1;
    } else {
      out += std::string(t[i].symbol());
      ++i;
    }
  }
  return out + ")";
}

// ---------------------------------------------------------------------------

std::string c1_x86_nop() {
  TranslatorConfig config;
  config.rule_files = {(kSamples / "x86.gt").string()};
  config.source_file = "-";
  std::istringstream in("nop\n");
  std::ostringstream out;
  const auto start = std::chrono::steady_clock::now();
  RunReport report = translate(config, in, out);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(report.status == RunStatus::Ok, "run failed");
  expect(out.str() == "\x90", "raw output " + hex(std::vector<std::uint8_t>(out.str().begin(), out.str().end())));
  expect(seconds < kNopRuntimeLimitSeconds, "took " + std::to_string(seconds) + " s");
  return "raw [90] in " + std::to_string(seconds * 1000).substr(0, 5) + " ms";
}

std::string c2_arm_riscv_nop() {
  TranslateOptions big;
  big.endian = Endian::Big;
  auto arm = run_units(sample_units("nop.src", {"arm.gt"})).bytes;
  auto riscv = run_units(sample_units("nop.src", {"riscv.gt"})).bytes;
  expect(arm == gentrans::testing::bytes({0x00, 0x00, 0xA0, 0xE1}), "ARM " + hex(arm));
  expect(riscv == gentrans::testing::bytes({0x13, 0x00, 0x00, 0x00}), "RISC-V " + hex(riscv));
  auto arm_big = run_units(sample_units("nop.src", {"arm.gt"}), big).bytes;
  auto riscv_big = run_units(sample_units("nop.src", {"riscv.gt"}), big).bytes;
  expect(arm_big == std::vector<std::uint8_t>(arm.rbegin(), arm.rend()), "ARM big-endian " + hex(arm_big));
  expect(riscv_big == std::vector<std::uint8_t>(riscv.rbegin(), riscv.rend()), "RISC-V big-endian " + hex(riscv_big));
  return "ARM " + hex(arm) + ", RISC-V " + hex(riscv) + ", reversed under big-endian";
}

std::string c3_a_to_z() {
  auto out = run_units(sample_units("az.src")).bytes;
  expect(out == gentrans::testing::bytes("ABCDEFGHIJKLMNOPQRSTUVWXYZ"), "got " + hex(out));
  return "26 bytes A..Z";
}

std::string c4_print_order() {
  auto d = run_units(sample_units("print_order.src")).diagnostics;
  expect(d == std::vector<std::string>{"Input Processing ...", "Output Processing ..."},
         "log order: " + (d.empty() ? std::string("<empty>") : d.front() + " / " + d.back()));
  return "Input before Output";
}

std::string c5_newest_wins() {
  ClassTable table = table_of("class Sum x + y {S1(x, y)}\nclass Sum x + y {S2(x, y)}\n");
  auto r = resolve("Sum", toks("a + b"), table);
  expect(r.has_value(), "no match");
  auto body = expand(*r->def, r->binding);
  expect(render(body.at(0)) == "S2 ( a , b )", "expanded to " + render(body.at(0)));
  return "Sum a + b -> " + render(body.at(0));
}

std::string c6_precedence_by_order() {
  ClassTable table = table_of(kETable);
  auto r = resolve("E", toks("a * b + c"), table);
  expect(r && render(r->def->pattern.at(1).tokens) == "+", "a * b + c not taken by the + definition");
  expect(render(r->binding.at("x")) == "a * b" && render(r->binding.at("y")) == "c", "wrong binding");

  // Two-operator expressions over + and *, with parenthesized operands.
  std::mt19937_64 rng(6);
  const std::vector<std::string> leaves = {"a", "b", "c", "1", "f(a + b)", "(a * b)", "(a + b * c)", "[a + b]"};
  for (int i = 0; i < kSplitSamples; ++i) {
    std::string text = leaves[rng() % leaves.size()];
    for (int k = 0; k < 2; ++k) text += std::string(rng() % 2 ? " + " : " * ") + leaves[rng() % leaves.size()];
    TokenSeq args = toks(text);
    std::vector<std::string> words;
    for (const Token& t : args) words.emplace_back(t.symbol());

    // Oracle: newest definition first; each binary one takes its rightmost
    // valid split found by enumerating every split point.
    std::string expected_op = "x";
    std::optional<std::size_t> at = oracle::rightmost_split(words, "+");
    if (at) expected_op = "+";
    else if ((at = oracle::rightmost_split(words, "*"))) expected_op = "*";

    auto got = resolve("E", args, table);
    expect(got.has_value(), "no match for " + text);
    const std::string got_op = got->def->params().size() == 1 ? "x" : render(got->def->pattern.at(1).tokens);
    expect(got_op == expected_op, text + ": chose " + got_op + ", oracle " + expected_op);
    if (at) {
      expect(render(got->binding.at("x")) == oracle::join(words, 0, *at), text + ": left operand");
      expect(render(got->binding.at("y")) == oracle::join(words, *at + 1, words.size()), text + ": right operand");
    }
  }
  return "x=`a * b`, y=`c`; " + std::to_string(kSplitSamples) + " random expressions agree with split enumeration";
}

std::string c7_associativity() {
  ClassTable left = table_of(std::string(kETable) + "class E x * y * z\n{E(x*y)*E(z)}\n");
  ClassTable right = table_of(std::string(kETable) + "class E x * y * z\n{E(x)*E(y*z)}\n");
  const std::string l = nest(toks("a * b * c"), left);
  const std::string r = nest(toks("a * b * c"), right);
  expect(l == "((a*b)*c)", "left variant gave " + l);
  expect(r == "(a*(b*c))", "right variant gave " + r);
  return "left " + l + ", right " + r;
}

std::string guard_program(const oracle::GuardModel& m) {
  std::string text = "db 0\n";
  for (const std::string& g : m.from_main) text += "dd " + g + "\n";
  for (const std::string& g : m.names) {
    text += "@if [" + g + "]\n" + g + ":\ndb 0xEE\n";
    if (auto it = m.from_block.find(g); it != m.from_block.end()) {
      for (const std::string& h : it->second) text += "dd " + h + "\n";
    }
    text += "@endif\n";
  }
  return text;
}

void check_guards(const oracle::GuardModel& m) {
  const std::string text = guard_program(m);
  const std::set<std::string> expected = oracle::expected_inclusion(m);
  IntermediateStream stream{tokenize_text(text, "guards")};
  GuardResolution got = resolve_guarded_procedures(stream, SymbolTable{});
  expect(got.included == expected, "inclusion set differs for:\n" + text);
  DiagnosticLog log;
  EmitImage image = run_dest_phase(stream, SymbolTable{}, log);
  std::size_t size = 1 + 4 * m.from_main.size();
  for (const std::string& g : expected) size += 1 + 4 * (m.from_block.contains(g) ? m.from_block.at(g).size() : 0);
  expect(image.bytes.size() == size, "image size differs for:\n" + text);
  for (const std::string& g : m.names) {
    expect(image.labels.contains(g) == expected.contains(g), "label table differs for " + g);
  }
}

std::string c8_dead_procedures() {
  oracle::GuardModel unused{{"P1"}, {}, {}};
  oracle::GuardModel used{{"P1"}, {"P1"}, {}};
  oracle::GuardModel chain{{"A", "B"}, {}, {{"B", {"A"}}}};
  check_guards(unused);
  check_guards(used);
  check_guards(chain);
  expect(oracle::expected_inclusion(unused).empty() && oracle::expected_inclusion(chain).empty() &&
             oracle::expected_inclusion(used).size() == 1,
         "fixed cases");

  std::mt19937_64 rng(8);
  const std::vector<std::string> names = {"P1", "P2", "P3"};
  for (int i = 0; i < kGuardSamples; ++i) {
    oracle::GuardModel m;
    m.names.assign(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(1 + rng() % kMaxGuards));
    for (const std::string& g : m.names) {
      if (rng() % 3 == 0) m.from_main.insert(g);
      for (const std::string& h : m.names) {
        if (rng() % 3 == 0) m.from_block[g].insert(h);
      }
    }
    check_guards(m);
  }
  return "unused, used and internal-chain cases plus " + std::to_string(kGuardSamples) +
         " random graphs match subset enumeration";
}

std::vector<std::string> print_trace(const std::string& text) {
  std::vector<std::string> out;
  const auto run = gentrans::testing::run_all("", text);
  for (const Diagnostic& d : run.log.entries()) out.push_back(d.text);
  return out;
}

std::string c9_engine_equivalence() {
  std::mt19937_64 rng(9);
  std::size_t prints = 0;
  for (int i = 0; i < kEngineSamples; ++i) {
    oracle::Program p = oracle::random_program(rng);
    const std::string hash_text = oracle::render_program(p, '#');
    const std::string at_text = oracle::render_program(p, '@');
    const auto expected = oracle::expected_trace(p);
    const auto by_hash = print_trace(hash_text);
    const auto by_at = print_trace(at_text);
    expect(by_hash == by_at, "traces differ for:\n" + hash_text);
    expect(by_hash == expected, "trace differs from the model for:\n" + hash_text);
    prints += expected.size();
  }
  return std::to_string(kEngineSamples) + " programs, " + std::to_string(prints) + " trace events identical";
}

std::string c10_emission_laws() {
  std::mt19937_64 rng(10);
  const char codes[] = {'b', 'w', 'd', 'p', 'q'};
  const int sizes[] = {1, 2, 4, 6, 8};
  auto emit = [](const std::string& text) { return gentrans::testing::run_dest(text).image.bytes; };
  for (int i = 0; i < kEmissionSamples; ++i) {
    const int c = i % 5;
    const std::size_t count = 1 + rng() % 8;
    std::string line = std::string("d") + codes[c] + " ";
    std::vector<std::uint8_t> expected;
    for (std::size_t k = 0; k < count; ++k) {
      std::int64_t v = static_cast<std::int64_t>(rng() >> (rng() % 64));
      if (rng() % 2) v = -v;
      line += (k ? ", " : "") + std::to_string(v);
      auto b = oracle::le_bytes(v, sizes[c]);
      expected.insert(expected.end(), b.begin(), b.end());
    }
    auto got = emit(line);
    expect(got.size() == count * static_cast<std::size_t>(sizes[c]), "length law: " + line);
    expect(got == expected, "little-endian law: " + line);

    const std::size_t n = rng() % 6;
    const std::int64_t v = static_cast<std::int64_t>(rng() % 1000000) - 500000;
    const auto unit = emit(std::string("d") + codes[c] + " " + std::to_string(v));
    std::vector<std::uint8_t> repeated;
    for (std::size_t k = 0; k < n; ++k) repeated.insert(repeated.end(), unit.begin(), unit.end());
    const std::string reserve = std::string("r") + codes[c] + " " + std::to_string(n) + ", " + std::to_string(v);
    expect(emit(reserve) == repeated, "reservation law: " + reserve);
  }
  return std::to_string(kEmissionSamples) + " value lists over b/w/d/p/q";
}

std::string c11_expression_oracle() {
  std::mt19937_64 rng(11);
  int valued = 0;
  for (int i = 0; i < kExprSamples;) {
    oracle::ExprPtr e = oracle::random_expr(rng, kExprDepth);
    auto expected = oracle::eval(*e);
    if (!expected) continue;  // only expressions that have a value
    const std::string text = oracle::print(*e);
    const Value got = evaluate(toks(text), SymbolTable{});
    expect(got.is_int() && got.as_int() == *expected,
           text + " = " + got.to_display() + ", oracle " + std::to_string(*expected));
    ++i;
    ++valued;
  }
  return std::to_string(valued) + " expressions of depth <= " + std::to_string(kExprDepth) + " match exactly";
}

std::string c12_define() {
  auto out = run_units({SourceText{"define.gt", read_file(kSamples / "define.gt")},
                        SourceText{"inc.src", "#define INC(v) v + 1\ndb INC(4)\n"}})
                 .bytes;
  expect(out == gentrans::testing::bytes({5}), "got " + hex(out));
  return "db INC(4) -> [05]";
}

std::string c13_break_levels() {
  // Outer and inner counters record how far each loop got.
  auto run = [](const std::string& brk) {
    auto r = gentrans::testing::run_source(
        "outer = 0\ninner = 0\n"
        "#repeat 3\nouter = outer + 1\n"
        "#repeat 3\ninner = inner + 1\n"
        "#if inner % 3 = 2\n" +
        brk +
        "\n#endif\n"
        "#print outer, \".\", inner\n"
        "#until\n#until\n");
    return std::make_pair(r.env.find("outer")->as_int(), r.prints());
  };
  auto [o0, p0] = run("#break 0");
  auto [o1, p1] = run("#break");
  auto [o2, p2] = run("#break 2");
  // continue: every iteration runs, the print of inner = 2, 5, 8 is skipped
  expect(o0 == 3 && p0.size() == 6, "#break 0: outer " + std::to_string(o0) + ", prints " + std::to_string(p0.size()));
  // one level: inner stops at its 2nd pass each time
  expect(o1 == 3 && p1 == std::vector<std::string>{"1.1", "2.3", "2.4", "3.6", "3.7"},
         "#break: outer " + std::to_string(o1));
  // two levels: both loops stop at inner = 2
  expect(o2 == 1 && p2 == std::vector<std::string>{"1.1"}, "#break 2: outer " + std::to_string(o2));
  return "continue, one level and two levels behave as traced";
}

std::string c14_determinism() {
  std::size_t programs = 0;
  std::vector<fs::path> sources;
  for (const auto& entry : fs::directory_iterator(kSamples)) {
    if (entry.path().extension() == ".src") sources.push_back(entry.path());
  }
  std::sort(sources.begin(), sources.end());
  for (const fs::path& src : sources) {
    auto units = sample_units(src.filename().string());
    auto first = run_units(units);
    auto second = run_units(units);
    expect(first.bytes == second.bytes, src.filename().string() + ": output differs");
    expect(first.diagnostics == second.diagnostics, src.filename().string() + ": diagnostics differ");
    for (OutputFormat f : {OutputFormat::Hex, OutputFormat::Listing}) {
      DiagnosticLog a, b;
      expect(format_output(translate_texts(units, {}, a).image, f) == format_output(translate_texts(units, {}, b).image, f),
             src.filename().string() + ": formatted output differs");
    }
    ++programs;
  }
  expect(programs >= 5, "sample corpus is missing");
  return std::to_string(programs) + " sample programs identical across runs";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<std::string()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "x86 nop", c1_x86_nop},
      {2, "ARM / RISC-V nop", c2_arm_riscv_nop},
      {3, "A..Z loop", c3_a_to_z},
      {4, "print ordering", c4_print_order},
      {5, "newest-wins resolution", c5_newest_wins},
      {6, "precedence by definition order", c6_precedence_by_order},
      {7, "associativity encodings", c7_associativity},
      {8, "dead procedure elimination", c8_dead_procedures},
      {9, "directive engine equivalence", c9_engine_equivalence},
      {10, "emission laws", c10_emission_laws},
      {11, "expression oracle", c11_expression_oracle},
      {12, "#define emulation", c12_define},
      {13, "break levels", c13_break_levels},
      {14, "determinism", c14_determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      detail = c.check();
      ok = true;
    } catch (const Failure& f) {
      detail = f.what();
    } catch (const Error& e) {
      detail = "error: " + e.describe();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    failed += ok ? 0 : 1;
    std::printf("%s  %2d  %-32s %s\n", ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
