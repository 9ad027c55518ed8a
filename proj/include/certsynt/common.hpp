#pragma once

#include <stdexcept>
#include <string>

namespace certsynt {

/// Syntax error in LTL text or a spec file, with 1-based source position.
struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                           std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

/// A configured resource cap was exceeded (automaton states, clauses, ...).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem or process-level failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Semantically invalid input: bad architecture, unknown atoms, malformed
/// machine files, violated operation preconditions.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace certsynt
