#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gentrans {

struct SourcePos {
  std::string file;
  std::uint32_t line = 0;
  std::uint32_t column = 0;

  bool known() const { return line != 0; }
};

enum class ErrorKind {
  Lexical,
  Syntax,
  Structure,
  Evaluation,
  Recursion,
  Runaway,
  User,
  Config,
  Internal,
};

const char* to_string(ErrorKind kind);

// Every fault raised while translating. Internal is reserved for broken
// invariants inside the engine; all other kinds are caused by the input.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, SourcePos pos = {});

  ErrorKind kind() const { return kind_; }
  const SourcePos& pos() const { return pos_; }
  const std::string& message() const { return message_; }

  // `file:line: message`, or the bare message when no position is known.
  std::string describe() const;

 private:
  ErrorKind kind_;
  std::string message_;
  SourcePos pos_;
};

std::string format_position(const SourcePos& pos);

}  // namespace gentrans
