#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repnet/tensor.hpp"

namespace repnet {

// Reverse-mode tape over Tensor2 values. Nodes are created in topological
// order by construction; backward() walks them once in reverse and
// accumulates adjoints into per-node gradient buffers. A tape is single-use:
// replaying backward twice signals internal misuse and throws.
class Tape {
 public:
  using Id = std::int32_t;

  Id leaf(const Tensor2& value);      // differentiable leaf (parameter slot)
  Id constant(const Tensor2& value);  // no gradient tracked

  Id matmul_nt(Id x, Id w);  // x (B x k) * w(n x k)^T -> (B x n)
  Id matmul(Id a, Id b);     // a (m x k) * b (k x n)
  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id scale(Id a, double c);
  Id add_bias(Id x, Id b);  // b is 1 x n, broadcast over the rows of x
  Id tanh_act(Id x);
  Id slice_cols(Id x, std::size_t c0, std::size_t c1);  // half-open [c0, c1)
  Id concat_cols(Id a, Id b);
  Id kron(Id a, Id b);

  Id mean_row_sq_diff(Id a, Id b);  // (1/rows) * sum (a - b)^2, a 1x1 node
  Id sum_sq(Id a);                  // sum a^2, a 1x1 node
  Id weighted_sum(std::span<const Id> terms, std::span<const double> weights);

  const Tensor2& value(Id id) const { return nodes_[id].value; }
  double scalar_value(Id id) const { return nodes_[id].value.data[0]; }

  void backward(Id root, double seed = 1.0);
  const Tensor2& grad(Id id) const;  // zero tensor if the node was unreached
  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    leaf, constant, matmul_nt, matmul, add, sub, scale, add_bias, tanh_act,
    slice_cols, concat_cols, kron, mean_row_sq_diff, sum_sq, weighted_sum,
  };

  struct Node {
    Op op;
    Id a = -1, b = -1;
    double c = 0.0;              // scale factor
    std::size_t c0 = 0, c1 = 0;  // slice bounds
    std::vector<Id> terms;       // weighted_sum inputs
    std::vector<double> weights;
    Tensor2 value;
  };

  Id push(Node n);
  void check(bool cond, const char* msg) const;

  std::vector<Node> nodes_;
  std::vector<Tensor2> grads_;
  bool consumed_ = false;
  mutable Tensor2 zero_;
};

}  // namespace repnet
