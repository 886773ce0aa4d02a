#pragma once

#include <optional>
#include <string>

#include "repnet/diagram.hpp"

namespace repnet {

// Diagram moves matching the trained link-system relations. Each rewrites the
// first applicable location (scanning slices bottom-up, strands left to
// right) and yields a diagram of the same link.
enum class Move { r2_insert, r3_exchange, slide_n_past_r };

const char* to_string(Move m);
Move move_from_string(const std::string& s);

// Label of the trained relation whose residual bounds the bracket deviation
// introduced by the move.
const char* move_relation_label(Move m);

// Empty when the move applies nowhere in the diagram.
std::optional<SlicedDiagram> move_perturb(const SlicedDiagram& d, Move m);

}  // namespace repnet
