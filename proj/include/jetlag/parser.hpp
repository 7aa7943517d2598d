#pragma once

#include "jetlag/expr.hpp"

#include <stdexcept>
#include <string>

namespace jetlag {

/// Syntax or validation failure; `offset` is the byte position in the input.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string message, size_t offset)
        : std::runtime_error(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    size_t offset() const { return offset_; }

  private:
    size_t offset_;
};

/// Parses the infix expression grammar over t, x1..xN, y1..yN.
/// Precedence: ^ (right assoc) > unary minus > * / > + -.
/// Functions: sin, cos, exp, ln, sqrt. Exponents must reduce to rational
/// constants. Variable indices are validated against the ambient dimension n.
Expr parse_expr(const std::string& text, int n);

}  // namespace jetlag
