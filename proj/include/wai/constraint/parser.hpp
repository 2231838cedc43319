#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wai/constraint/checker.hpp"
#include "wai/constraint/constraint.hpp"
#include "wai/constraint/variable_space.hpp"

namespace wai {

/// Syntax or semantic error in constraint text. `position` is a 0-based
/// byte offset into the parsed line; `line` is 1-based (0 when unknown).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position, std::string expected = {}, std::size_t line = 0);

  /// Message without the location prefix.
  [[nodiscard]] const std::string& message() const { return message_; }
  [[nodiscard]] std::size_t position() const { return position_; }
  [[nodiscard]] const std::string& expected() const { return expected_; }
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::string message_;
  std::size_t position_;
  std::string expected_;
  std::size_t line_;
};

/// `<class> <severity> [weight=<float>] <expr>`
///   sat: (a | !b) & (c)          fd: 2*i - j <= 3,  i in {1, 3}
///   lr:  1.5*v1 - 2*v2 <= 3.0    nl: sin(v1)*v2 <= 1.0,
///        dist_union(v1,v2; [0,1]x[0,1], [2,3]x[0,1]) <= 0
Constraint parse_constraint(std::string_view text, const VariableSpace& space);

/// `var <name> : bool | int <lo>..<hi> | int {a, b, ...} | real <lo>..<hi>`
Variable parse_variable(std::string_view text);

/// Whole constraint file: `var` declarations and constraint lines; `#` starts
/// a comment. Declarations may appear anywhere in the file.
ConstraintSystem parse_constraint_system(std::string_view text);

}  // namespace wai
