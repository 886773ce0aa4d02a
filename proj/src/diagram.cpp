#include "repnet/diagram.hpp"

#include <sstream>
#include <stdexcept>

namespace repnet {

std::size_t prim_in(Prim p) {
  switch (p) {
    case Prim::cup: return 0;
    case Prim::cap: return 2;
    case Prim::cross: return 2;
    case Prim::cross_inv: return 2;
    case Prim::strand: return 1;
  }
  return 0;
}

std::size_t prim_out(Prim p) {
  switch (p) {
    case Prim::cup: return 2;
    case Prim::cap: return 0;
    case Prim::cross: return 2;
    case Prim::cross_inv: return 2;
    case Prim::strand: return 1;
  }
  return 0;
}

const char* to_string(Prim p) {
  switch (p) {
    case Prim::cup: return "cup";
    case Prim::cap: return "cap";
    case Prim::cross: return "cross";
    case Prim::cross_inv: return "cross_inv";
    case Prim::strand: return "strand";
  }
  return "?";
}

std::size_t SlicedDiagram::slice_in(std::size_t k) const {
  std::size_t n = 0;
  for (Prim p : slices[k]) n += prim_in(p);
  return n;
}

std::size_t SlicedDiagram::slice_out(std::size_t k) const {
  std::size_t n = 0;
  for (Prim p : slices[k]) n += prim_out(p);
  return n;
}

bool SlicedDiagram::closed() const {
  return !slices.empty() && slice_in(0) == 0 && slice_out(slices.size() - 1) == 0;
}

void validate_diagram(const SlicedDiagram& d) {
  if (d.slices.empty()) throw std::invalid_argument("diagram has no slices");
  for (std::size_t k = 0; k + 1 < d.slices.size(); ++k) {
    if (d.slice_out(k) != d.slice_in(k + 1))
      throw std::invalid_argument(
          "strand-count mismatch: slice " + std::to_string(k + 1) + " outputs " +
          std::to_string(d.slice_out(k)) + " strands but slice " +
          std::to_string(k + 2) + " expects " + std::to_string(d.slice_in(k + 1)));
  }
}

SlicedDiagram parse_diagram(std::string_view text) {
  SlicedDiagram d;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);

    std::istringstream ls{std::string(raw)};
    std::vector<Prim> slice;
    std::string tok;
    while (ls >> tok) {
      if (tok == "cup") slice.push_back(Prim::cup);
      else if (tok == "cap") slice.push_back(Prim::cap);
      else if (tok == "cross") slice.push_back(Prim::cross);
      else if (tok == "cross_inv") slice.push_back(Prim::cross_inv);
      else if (tok == "strand") slice.push_back(Prim::strand);
      else
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": unknown primitive '" + tok + "'");
    }
    if (!slice.empty()) d.slices.push_back(std::move(slice));
  }
  validate_diagram(d);
  return d;
}

std::string diagram_to_string(const SlicedDiagram& d) {
  std::string out;
  for (const auto& slice : d.slices) {
    for (std::size_t i = 0; i < slice.size(); ++i) {
      if (i) out += ' ';
      out += to_string(slice[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace repnet
