#pragma once

#include "repnet/diagram.hpp"
#include "repnet/extract.hpp"
#include "repnet/tensor.hpp"

namespace repnet {

// Collapsed link-system maps under tensor semantics: R and its inverse on
// V⊗V (d^2 x d^2), the cap n (1 x d^2) and the cup u (d^2 x 1), where d is
// the strand dimension. Zero strands correspond to the scalar line, so a
// closed diagram composes to a 1x1 matrix.
struct RtMaps {
  std::size_t dim = 2;
  Tensor2 R, R_inv, n, u;
};

// Extracts {R, R_inv, n, u} from a collapsed tensor-semantics representation.
RtMaps rt_maps_from(const LinearRep& rep);

Tensor2 slice_matrix(const std::vector<Prim>& slice, const RtMaps& maps);

// Composes the slices bottom to top and applies the result to the scalar 1.
double evaluate_bracket(const SlicedDiagram& d, const RtMaps& maps);

}  // namespace repnet
