#include "gentrans/diagnostics.hpp"

namespace gentrans {

std::string Diagnostic::render() const {
  if (kind == Kind::Print) return text;
  std::string where = format_position(pos);
  return where.empty() ? text : where + ": " + text;
}

void DiagnosticLog::add(Diagnostic d) {
  entries_.push_back(std::move(d));
  if (listener_) listener_(entries_.back());
}

std::vector<std::string> DiagnosticLog::rendered() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const Diagnostic& d : entries_) out.push_back(d.render());
  return out;
}

}  // namespace gentrans
