#include "gentrans/error.hpp"

namespace gentrans {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Lexical: return "lexical error";
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::Structure: return "structure error";
    case ErrorKind::Evaluation: return "evaluation error";
    case ErrorKind::Recursion: return "recursion error";
    case ErrorKind::Runaway: return "runaway loop";
    case ErrorKind::User: return "error";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Internal: return "internal error";
  }
  return "error";
}

std::string format_position(const SourcePos& pos) {
  if (!pos.known()) return {};
  std::string out = pos.file.empty() ? std::string("<input>") : pos.file;
  out += ':';
  out += std::to_string(pos.line);
  return out;
}

Error::Error(ErrorKind kind, std::string message, SourcePos pos)
    : std::runtime_error(message), kind_(kind), message_(std::move(message)), pos_(std::move(pos)) {}

std::string Error::describe() const {
  std::string where = format_position(pos_);
  std::string text = kind_ == ErrorKind::User ? message_ : std::string(to_string(kind_)) + ": " + message_;
  if (where.empty()) return text;
  return where + ": " + text;
}

}  // namespace gentrans
