#pragma once

// Static and structural errors thrown across the library. Undefinedness of
// the partial evaluation semantics is *not* an error and is reported as a
// value (see EvalFailure in hypergraph.hpp).

#include <cstddef>
#include <stdexcept>
#include <string>

namespace metacat {

// 1-based position in a source file; line 0 means "no position".
struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;

  bool valid() const { return line > 0; }
};

enum class ErrorKind {
  DuplicateSymbol,
  DuplicateName,
  ArityMismatch,
  UnknownGenerator,
  UnknownSymbol,
  UnknownTheorem,
  WrongArgCount,
  UnboundMetavariable,
  ParseError,
  CyclicGraph,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DuplicateSymbol: return "duplicate symbol";
    case ErrorKind::DuplicateName: return "duplicate name";
    case ErrorKind::ArityMismatch: return "arity mismatch";
    case ErrorKind::UnknownGenerator: return "unknown generator";
    case ErrorKind::UnknownSymbol: return "unknown symbol";
    case ErrorKind::UnknownTheorem: return "unknown theorem";
    case ErrorKind::WrongArgCount: return "wrong argument count";
    case ErrorKind::UnboundMetavariable: return "unbound metavariable";
    case ErrorKind::ParseError: return "parse error";
    case ErrorKind::CyclicGraph: return "cyclic graph";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, SourcePos pos = {})
      : std::runtime_error(format(kind, message, pos)),
        kind_(kind),
        pos_(pos),
        message_(message) {}

  ErrorKind kind() const { return kind_; }
  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }  // without kind/position

 private:
  static std::string format(ErrorKind kind, const std::string& message, SourcePos pos) {
    std::string out;
    if (pos.valid()) {
      out += std::to_string(pos.line);
      out += ':';
      out += std::to_string(pos.column);
      out += ": ";
    }
    out += error_kind_name(kind);
    out += ": ";
    out += message;
    return out;
  }

  ErrorKind kind_;
  SourcePos pos_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message, SourcePos pos = {}) {
  throw Error(kind, message, pos);
}

}  // namespace metacat
