#ifndef LEXDECOMP_ERROR_HPP
#define LEXDECOMP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lexdecomp {

enum class ErrorKind {
  invalid_argument,   // bad values passed to a library call
  dimension_mismatch, // shapes/sizes disagree
  parse,              // malformed input file
  config,             // invalid or inconsistent configuration / usage
  io,                 // file missing or unreadable
  checkpoint,         // corrupt or incompatible checkpoint
  eval,               // nothing left to evaluate
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);
[[noreturn]] void fail_parse(const std::string& file, std::size_t line_no,
                             const std::string& message);

}  // namespace lexdecomp

#endif
