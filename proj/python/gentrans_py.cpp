#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "gentrans/classes.hpp"
#include "gentrans/error.hpp"
#include "gentrans/expr.hpp"
#include "gentrans/lexer.hpp"
#include "gentrans/source_phase.hpp"
#include "gentrans/translator.hpp"

namespace py = pybind11;
using namespace gentrans;

namespace {

using PyValue = std::variant<std::int64_t, std::string>;

PyValue to_py(const Value& v) {
  if (v.is_int()) return v.as_int();
  return v.as_string();
}

Value from_py(const PyValue& v) {
  if (std::holds_alternative<std::int64_t>(v)) return std::get<std::int64_t>(v);
  return std::get<std::string>(v);
}

const char* kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Integer: return "integer";
    case TokenKind::String: return "string";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::DirectiveKey: return "directive-key";
  }
  return "?";
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Lexical: return "lexical";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Structure: return "structure";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::Recursion: return "recursion";
    case ErrorKind::Runaway: return "runaway";
    case ErrorKind::User: return "user";
    case ErrorKind::Config: return "config";
    case ErrorKind::Internal: return "internal";
  }
  return "?";
}

PyObject* translation_error = nullptr;

[[noreturn]] void raise(const Error& e, const std::vector<std::string>& diagnostics) {
  py::object err = py::reinterpret_borrow<py::object>(translation_error)(e.describe());
  err.attr("kind") = error_kind_name(e.kind());
  err.attr("line") = e.pos().line;
  err.attr("diagnostics") = diagnostics;
  PyErr_SetObject(translation_error, err.ptr());
  throw py::error_already_set();
}

struct Result {
  EmitImage image;
  std::vector<std::string> stream;
  std::vector<std::string> diagnostics;

  py::bytes data() const {
    return py::bytes(reinterpret_cast<const char*>(image.bytes.data()), image.bytes.size());
  }
  std::string format(const std::string& name) const {
    if (name == "raw") return std::string(image.bytes.begin(), image.bytes.end());
    if (name == "hex") return format_output(image, OutputFormat::Hex);
    if (name == "listing") return format_output(image, OutputFormat::Listing);
    throw py::value_error("format must be raw, hex or listing");
  }
};

Result translate_py(const std::string& source, const std::vector<std::string>& rules, const std::string& endian,
                    bool strict_overflow, const std::map<std::string, PyValue>& defines, std::uint64_t max_loop,
                    std::size_t max_depth) {
  TranslateOptions options;
  if (endian != "little" && endian != "big") throw py::value_error("endian must be 'little' or 'big'");
  options.endian = endian == "big" ? Endian::Big : Endian::Little;
  options.strict_overflow = strict_overflow;
  options.loop_cap = max_loop;
  options.max_depth = max_depth;
  for (const auto& [name, v] : defines) options.defines.emplace_back(name, from_py(v));

  std::vector<SourceText> units;
  for (std::size_t i = 0; i < rules.size(); ++i) units.push_back(SourceText{"rules" + std::to_string(i + 1), rules[i]});
  units.push_back(SourceText{"source", source});

  DiagnosticLog log;
  Result result;
  try {
    py::gil_scoped_release release;
    Translation t = translate_texts(units, options, log);
    result.image = std::move(t.image);
    for (const TokenLine& l : t.stream.lines) result.stream.push_back(render(l));
  } catch (const Error& e) {
    std::vector<std::string> diagnostics = log.rendered();
    if (e.kind() != ErrorKind::User) diagnostics.push_back(e.describe());
    raise(e, diagnostics);
  }
  result.diagnostics = log.rendered();
  return result;
}

py::object resolve_py(const std::string& rules, const std::string& name, const std::string& args) {
  ClassTable table;
  SymbolTable env;
  DiagnosticLog log;
  std::vector<TokenLine> lines = tokenize_text(rules, "rules");
  run_source_phase(lines, env, table, log);
  TokenSeq tokens = tokenize(args, SourcePos{"args", 1, 1});
  auto r = resolve(name, tokens, table);
  if (!r) return py::none();
  py::dict binding;
  for (const auto& [param, bound] : r->binding) binding[py::str(param)] = render(bound);
  std::vector<std::string> body;
  for (const TokenLine& l : expand(*r->def, r->binding)) body.push_back(render(l));
  py::dict out;
  out["name"] = r->def->name;
  out["seq"] = r->def->seq;
  out["binding"] = binding;
  out["expansion"] = body;
  return out;
}

}  // namespace

PYBIND11_MODULE(_gentrans, m) {
  m.doc() = "Two-level general translator: class rules and directives to bytes";

  static py::exception<Error> exc(m, "TranslationError", PyExc_RuntimeError);
  translation_error = exc.ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      try {
        raise(e, {});
      } catch (py::error_already_set& set) {
        set.restore();
      }
    }
  });

  py::class_<Result>(m, "Result")
      .def_property_readonly("data", &Result::data, "The output bytes")
      .def_readonly("stream", &Result::stream, "Lines handed from the source level to the destination level")
      .def_readonly("diagnostics", &Result::diagnostics)
      .def_property_readonly("labels", [](const Result& r) { return r.image.labels; })
      .def("format", &Result::format, py::arg("name") = "hex")
      .def("__len__", [](const Result& r) { return r.image.bytes.size(); })
      .def("__repr__", [](const Result& r) { return "<Result " + std::to_string(r.image.bytes.size()) + " bytes>"; });

  m.def(
      "tokenize",
      [](const std::string& line) {
        std::vector<py::tuple> out;
        for (const Token& t : tokenize(line, SourcePos{"<line>", 1, 1})) {
          py::object value = py::none();
          if (t.kind == TokenKind::Integer) value = py::int_(t.number);
          if (t.kind == TokenKind::String) value = py::str(t.string_value());
          out.push_back(py::make_tuple(kind_name(t.kind), std::string(t.symbol()), value));
        }
        return out;
      },
      py::arg("line"), "Tokens of one line as (kind, text, value) tuples");

  m.def(
      "classify_line", [](const std::string& line) { return std::string(to_string(classify_line(tokenize(line, SourcePos{"<line>", 1, 1})))); },
      py::arg("line"));

  m.def(
      "evaluate",
      [](const std::string& expr, const std::map<std::string, PyValue>& env) {
        SymbolTable table;
        for (const auto& [name, v] : env) table.assign(name, from_py(v));
        return to_py(evaluate(tokenize(expr, SourcePos{"<expr>", 1, 1}), table));
      },
      py::arg("expr"), py::arg("env") = std::map<std::string, PyValue>{});

  m.def("translate", &translate_py, py::arg("source"), py::arg("rules") = std::vector<std::string>{},
        py::arg("endian") = "little", py::arg("strict_overflow") = false,
        py::arg("defines") = std::map<std::string, PyValue>{}, py::arg("max_loop") = 1'000'000,
        py::arg("max_depth") = 1024, "Translate source text after the given rule texts");

  m.def("resolve", &resolve_py, py::arg("rules"), py::arg("name"), py::arg("args"),
        "Which definition of a class the arguments select, with its binding and expansion; None if none matches");

  m.def(
      "hexdump",
      [](const py::bytes& data) {
        EmitImage image;
        std::string s = data;
        image.bytes.assign(s.begin(), s.end());
        return format_output(image, OutputFormat::Hex);
      },
      py::arg("data"));
}
