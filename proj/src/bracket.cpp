#include "repnet/bracket.hpp"

#include <stdexcept>

namespace repnet {

RtMaps rt_maps_from(const LinearRep& rep) {
  if (rep.semantics != ProductSemantics::tensor)
    throw std::invalid_argument("bracket evaluation needs tensor-semantics maps");
  RtMaps out;
  out.dim = rep.block_dim;
  auto fetch = [&](const char* name) -> const AffineMap& {
    auto it = rep.maps.find(name);
    if (it == rep.maps.end())
      throw std::invalid_argument(std::string("missing map ") + name);
    if (!it->second.linear())
      throw std::invalid_argument(std::string("map ") + name + " must be linear");
    return it->second;
  };
  const std::size_t d2 = out.dim * out.dim;
  out.R = fetch("R").m;
  out.R_inv = fetch("R_inv").m;
  out.n = fetch("n").m;
  out.u = fetch("u").m;
  if (out.R.rows != d2 || out.R.cols != d2 || out.R_inv.rows != d2 ||
      out.R_inv.cols != d2 || out.n.rows != 1 || out.n.cols != d2 || out.u.rows != d2 ||
      out.u.cols != 1)
    throw std::invalid_argument("rt map dimensions do not match the strand dimension");
  return out;
}

Tensor2 slice_matrix(const std::vector<Prim>& slice, const RtMaps& maps) {
  Tensor2 acc = Tensor2::identity(1);
  const Tensor2 strand = Tensor2::identity(maps.dim);
  for (Prim p : slice) {
    switch (p) {
      case Prim::cup: acc = kron(acc, maps.u); break;
      case Prim::cap: acc = kron(acc, maps.n); break;
      case Prim::cross: acc = kron(acc, maps.R); break;
      case Prim::cross_inv: acc = kron(acc, maps.R_inv); break;
      case Prim::strand: acc = kron(acc, strand); break;
    }
  }
  return acc;
}

double evaluate_bracket(const SlicedDiagram& d, const RtMaps& maps) {
  validate_diagram(d);
  if (!d.closed()) throw std::invalid_argument("bracket of an open diagram is not a scalar");
  Tensor2 acc = Tensor2::identity(1);
  for (const auto& slice : d.slices) acc = matmul(slice_matrix(slice, maps), acc);
  if (acc.rows != 1 || acc.cols != 1)
    throw std::logic_error("closed diagram did not compose to a scalar");
  return acc.data[0];
}

}  // namespace repnet
