#pragma once

#include <string>

#include "repnet/extract.hpp"

namespace repnet {

// Plain-text matrix exchange format, 17 significant digits per entry:
//
//   semantics concat|tensor
//   block_dim <n>
//   matrix <name> <rows> <cols>
//   <row of values>
//   ...
//   offset <name> <len>        # affine maps only
//   <values>
//
// Lines starting with '#' are comments.
std::string rep_to_text(const LinearRep& rep);
LinearRep rep_from_text(const std::string& text);

void write_rep(const std::string& path, const LinearRep& rep);
LinearRep read_rep(const std::string& path);

}  // namespace repnet
