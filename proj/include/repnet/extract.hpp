#pragma once

#include <map>
#include <string>
#include <vector>

#include "repnet/net.hpp"
#include "repnet/presentation.hpp"
#include "repnet/tensor.hpp"

namespace repnet {

// A collapsed linear or affine map: x -> M x + offset. An empty offset means
// zero (pure linear).
struct AffineMap {
  Tensor2 m;
  std::vector<double> offset;

  bool linear() const { return offset.empty(); }
  std::size_t in_width() const { return m.cols; }
  std::size_t out_width() const { return m.rows; }
};

// Product of the layer weights (last layer leftmost), offsets propagated
// through the chain. Rejects nonlinear nets.
AffineMap collapse(const GeneratorNet& net);

Tensor2 apply(const AffineMap& f, const Tensor2& x);  // batch rows

AffineMap compose(const AffineMap& after, const AffineMap& first);
AffineMap direct_sum(const AffineMap& a, const AffineMap& b);
AffineMap kron_map(const AffineMap& a, const AffineMap& b);  // linear operands only
AffineMap add_maps(const AffineMap& a, const AffineMap& b);
AffineMap scale_map(const AffineMap& a, double c);
AffineMap identity_map(std::size_t width);

// Frobenius distance between two maps, offsets included.
double map_distance(const AffineMap& a, const AffineMap& b);

// Gauss-Jordan inverse with partial pivoting; throws on singular input.
Tensor2 gauss_inverse(const Tensor2& a);

struct LinearRep {
  std::size_t block_dim = 1;
  ProductSemantics semantics = ProductSemantics::concat;
  std::map<std::string, AffineMap> maps;  // keyed by net name
};

// Collapses every net of a trained system (inverse nets included).
LinearRep collapse_all(const Presentation& p, const NetMap& nets);

// Exact per-relation Frobenius residuals ||lhs_matrix - rhs_matrix||_F,
// no sampling involved. Missing inverse maps are completed by matrix
// inversion when `complete_inverses` is set.
std::vector<std::pair<std::string, double>> verify_matrix_relations(
    const LinearRep& rep, const Presentation& p, bool complete_inverses = false);

}  // namespace repnet
