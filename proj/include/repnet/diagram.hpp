#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace repnet {

enum class Prim { cup, cap, cross, cross_inv, strand };

std::size_t prim_in(Prim p);   // strands consumed
std::size_t prim_out(Prim p);  // strands produced
const char* to_string(Prim p);

// A link diagram cut into horizontal slices, bottom first. Slice widths must
// chain; a diagram with no input and no output strands is closed.
struct SlicedDiagram {
  std::vector<std::vector<Prim>> slices;

  std::size_t slice_in(std::size_t k) const;
  std::size_t slice_out(std::size_t k) const;
  bool closed() const;
};

// Checks the strand-count chain; throws with the offending slice index.
void validate_diagram(const SlicedDiagram& d);

// One slice per line, primitives space-separated from
// {cup, cap, cross, cross_inv, strand}; '#' starts a comment.
SlicedDiagram parse_diagram(std::string_view text);
std::string diagram_to_string(const SlicedDiagram& d);

}  // namespace repnet
