#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gentrans/error.hpp"

namespace gentrans {

struct Diagnostic {
  enum class Kind { Print, Error };
  Kind kind = Kind::Print;
  char phase = '#';  // '#' source level, '@' destination level, 0 for the driver
  std::string text;
  SourcePos pos;

  // Prints are bare text; errors carry `file:line: `.
  std::string render() const;
};

// Ordered message log. Both phases write to the same log, so everything the
// source level prints precedes everything the destination level prints.
class DiagnosticLog {
 public:
  using Listener = std::function<void(const Diagnostic&)>;

  void add(Diagnostic d);
  void print(char phase, std::string text, SourcePos pos) {
    add(Diagnostic{Diagnostic::Kind::Print, phase, std::move(text), std::move(pos)});
  }
  void error(char phase, std::string text, SourcePos pos) {
    add(Diagnostic{Diagnostic::Kind::Error, phase, std::move(text), std::move(pos)});
  }

  // Called for every entry as it is added.
  void set_listener(Listener l) { listener_ = std::move(l); }

  const std::vector<Diagnostic>& entries() const { return entries_; }
  std::vector<std::string> rendered() const;

 private:
  std::vector<Diagnostic> entries_;
  Listener listener_;
};

}  // namespace gentrans
