#include "lexdecomp/error.hpp"

namespace lexdecomp {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::parse: return "parse";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::checkpoint: return "checkpoint";
    case ErrorKind::eval: return "eval";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

void fail_parse(const std::string& file, std::size_t line_no,
                const std::string& message) {
  throw Error(ErrorKind::parse,
              file + ":" + std::to_string(line_no) + ": " + message);
}

}  // namespace lexdecomp
