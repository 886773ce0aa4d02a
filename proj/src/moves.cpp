#include "repnet/moves.hpp"

#include <stdexcept>

namespace repnet {

const char* to_string(Move m) {
  switch (m) {
    case Move::r2_insert: return "R2_insert";
    case Move::r3_exchange: return "R3_exchange";
    case Move::slide_n_past_r: return "slide_n_past_R";
  }
  return "?";
}

Move move_from_string(const std::string& s) {
  if (s == "R2_insert") return Move::r2_insert;
  if (s == "R3_exchange") return Move::r3_exchange;
  if (s == "slide_n_past_R") return Move::slide_n_past_r;
  throw std::invalid_argument("unknown move: " + s);
}

const char* move_relation_label(Move m) {
  switch (m) {
    case Move::r2_insert: return "R^-1.R = id";
    case Move::r3_exchange: return "Yang Baxter";
    case Move::slide_n_past_r: return "(id⊗n)(R⊗id) = (n⊗id)(id⊗R)";
  }
  return "?";
}

namespace {

// Slice consisting of strands with a single wide primitive at strand
// position `at` (0-based, counted on the input side).
std::vector<Prim> one_prim_slice(std::size_t in_width, Prim p, std::size_t at) {
  std::vector<Prim> slice;
  for (std::size_t i = 0; i < at; ++i) slice.push_back(Prim::strand);
  slice.push_back(p);
  for (std::size_t i = at + prim_in(p); i < in_width; ++i) slice.push_back(Prim::strand);
  return slice;
}

// Matches a slice that is all strands except one `p` at input position `at`.
bool matches_one_prim(const std::vector<Prim>& slice, Prim p, std::size_t at,
                      std::size_t in_width) {
  return slice == one_prim_slice(in_width, p, at);
}

std::optional<SlicedDiagram> try_r2(const SlicedDiagram& d) {
  // First boundary carrying at least two strands; the inverse pair goes on
  // the leftmost strand pair.
  for (std::size_t k = 0; k < d.slices.size(); ++k) {
    const std::size_t w = d.slice_out(k);
    if (w < 2) continue;
    SlicedDiagram out = d;
    out.slices.insert(out.slices.begin() + static_cast<std::ptrdiff_t>(k + 1),
                      {one_prim_slice(w, Prim::cross, 0),
                       one_prim_slice(w, Prim::cross_inv, 0)});
    return out;
  }
  return std::nullopt;
}

std::optional<SlicedDiagram> try_r3(const SlicedDiagram& d) {
  for (std::size_t k = 0; k + 2 < d.slices.size(); ++k) {
    const std::size_t w = d.slice_in(k);
    if (w < 3 || d.slice_in(k + 1) != w || d.slice_in(k + 2) != w) continue;
    for (std::size_t j = 0; j + 2 < w; ++j) {
      if (matches_one_prim(d.slices[k], Prim::cross, j, w) &&
          matches_one_prim(d.slices[k + 1], Prim::cross, j + 1, w) &&
          matches_one_prim(d.slices[k + 2], Prim::cross, j, w)) {
        SlicedDiagram out = d;
        out.slices[k] = one_prim_slice(w, Prim::cross, j + 1);
        out.slices[k + 1] = one_prim_slice(w, Prim::cross, j);
        out.slices[k + 2] = one_prim_slice(w, Prim::cross, j + 1);
        return out;
      }
    }
  }
  return std::nullopt;
}

std::optional<SlicedDiagram> try_slide(const SlicedDiagram& d) {
  for (std::size_t k = 0; k + 1 < d.slices.size(); ++k) {
    const std::size_t w = d.slice_in(k);
    if (w < 3 || d.slice_in(k + 1) != w) continue;
    for (std::size_t j = 0; j + 2 < w; ++j) {
      // (id ⊗ n)(R ⊗ id): crossing at (j, j+1) under a cap at (j+1, j+2).
      if (matches_one_prim(d.slices[k], Prim::cross, j, w) &&
          matches_one_prim(d.slices[k + 1], Prim::cap, j + 1, w)) {
        SlicedDiagram out = d;
        out.slices[k] = one_prim_slice(w, Prim::cross, j + 1);
        out.slices[k + 1] = one_prim_slice(w, Prim::cap, j);
        return out;
      }
      // Mirror direction: (n ⊗ id)(id ⊗ R) back to the first form.
      if (matches_one_prim(d.slices[k], Prim::cross, j + 1, w) &&
          matches_one_prim(d.slices[k + 1], Prim::cap, j, w)) {
        SlicedDiagram out = d;
        out.slices[k] = one_prim_slice(w, Prim::cross, j);
        out.slices[k + 1] = one_prim_slice(w, Prim::cap, j + 1);
        return out;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<SlicedDiagram> move_perturb(const SlicedDiagram& d, Move m) {
  validate_diagram(d);
  std::optional<SlicedDiagram> out;
  switch (m) {
    case Move::r2_insert: out = try_r2(d); break;
    case Move::r3_exchange: out = try_r3(d); break;
    case Move::slide_n_past_r: out = try_slide(d); break;
  }
  if (out) validate_diagram(*out);
  return out;
}

}  // namespace repnet
