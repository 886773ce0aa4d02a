#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "repnet/presentation.hpp"

namespace repnet {

struct ParseError : std::runtime_error {
  std::size_t line;
  std::size_t col;
  ParseError(std::size_t line_, std::size_t col_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ", col " +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

// Parses the line-oriented presentation grammar:
//
//   name <identifier>                      # optional
//   structure group|algebra|lie|custom
//   semantics concat|tensor                # optional, default concat
//   scalar <name> = <float>
//   generator <name> arity <in>-><out> [invertible]
//   relation [<label>:] <expr> = <expr>
//
//   expr := term ('*' term)*               composition, left applied last
//   term := atom ('x' atom)*               block product
//   atom := prim ('+' prim)*
//   prim := <gen> | inv(<gen>) | id | id^<k> | <float> prim | <scalar> prim
//           | (<expr>) | place(<gen>, <i>, <m>)
//
// '#' starts a comment. The returned presentation is validated.
Presentation parse_presentation(std::string_view text);

}  // namespace repnet
