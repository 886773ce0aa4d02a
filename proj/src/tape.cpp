#include "repnet/tape.hpp"

#include <cmath>
#include <stdexcept>

#include "repnet/kernels.hpp"

namespace repnet {

void Tape::check(bool cond, const char* msg) const {
  if (!cond) throw std::invalid_argument(msg);
}

Tape::Id Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::leaf(const Tensor2& value) {
  return push({Op::leaf, -1, -1, 0.0, 0, 0, {}, {}, value});
}

Tape::Id Tape::constant(const Tensor2& value) {
  return push({Op::constant, -1, -1, 0.0, 0, 0, {}, {}, value});
}

Tape::Id Tape::matmul_nt(Id x, Id w) {
  const Tensor2& xv = nodes_[x].value;
  const Tensor2& wv = nodes_[w].value;
  check(xv.cols == wv.cols, "matmul_nt: width mismatch");
  return push({Op::matmul_nt, x, w, 0.0, 0, 0, {}, {}, repnet::matmul_nt(xv, wv)});
}

Tape::Id Tape::matmul(Id a, Id b) {
  const Tensor2& av = nodes_[a].value;
  const Tensor2& bv = nodes_[b].value;
  check(av.cols == bv.rows, "matmul: inner dims differ");
  return push({Op::matmul, a, b, 0.0, 0, 0, {}, {}, repnet::matmul(av, bv)});
}

Tape::Id Tape::add(Id a, Id b) {
  check(nodes_[a].value.same_shape(nodes_[b].value), "add: shape mismatch");
  return push({Op::add, a, b, 0.0, 0, 0, {}, {},
               repnet::add(nodes_[a].value, nodes_[b].value)});
}

Tape::Id Tape::sub(Id a, Id b) {
  check(nodes_[a].value.same_shape(nodes_[b].value), "sub: shape mismatch");
  return push({Op::sub, a, b, 0.0, 0, 0, {}, {},
               repnet::sub(nodes_[a].value, nodes_[b].value)});
}

Tape::Id Tape::scale(Id a, double c) {
  return push({Op::scale, a, -1, c, 0, 0, {}, {}, repnet::scale(nodes_[a].value, c)});
}

Tape::Id Tape::add_bias(Id x, Id b) {
  const Tensor2& xv = nodes_[x].value;
  const Tensor2& bv = nodes_[b].value;
  check(bv.rows == 1 && bv.cols == xv.cols, "add_bias: bias shape mismatch");
  Tensor2 out = xv;
  for (std::size_t r = 0; r < out.rows; ++r)
    kern::ops().axpy(out.row(r), 1.0, bv.row(0), out.cols);
  return push({Op::add_bias, x, b, 0.0, 0, 0, {}, {}, std::move(out)});
}

Tape::Id Tape::tanh_act(Id x) {
  Tensor2 out = nodes_[x].value;
  for (double& v : out.data) v = std::tanh(v);
  return push({Op::tanh_act, x, -1, 0.0, 0, 0, {}, {}, std::move(out)});
}

Tape::Id Tape::slice_cols(Id x, std::size_t c0, std::size_t c1) {
  const Tensor2& xv = nodes_[x].value;
  check(c0 <= c1 && c1 <= xv.cols, "slice_cols: bad range");
  Tensor2 out(xv.rows, c1 - c0);
  for (std::size_t r = 0; r < xv.rows; ++r)
    for (std::size_t j = c0; j < c1; ++j) out.at(r, j - c0) = xv.at(r, j);
  return push({Op::slice_cols, x, -1, 0.0, c0, c1, {}, {}, std::move(out)});
}

Tape::Id Tape::concat_cols(Id a, Id b) {
  const Tensor2& av = nodes_[a].value;
  const Tensor2& bv = nodes_[b].value;
  check(av.rows == bv.rows, "concat_cols: row mismatch");
  Tensor2 out(av.rows, av.cols + bv.cols);
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t j = 0; j < av.cols; ++j) out.at(r, j) = av.at(r, j);
    for (std::size_t j = 0; j < bv.cols; ++j) out.at(r, av.cols + j) = bv.at(r, j);
  }
  return push({Op::concat_cols, a, b, 0.0, 0, 0, {}, {}, std::move(out)});
}

Tape::Id Tape::kron(Id a, Id b) {
  return push({Op::kron, a, b, 0.0, 0, 0, {}, {},
               repnet::kron(nodes_[a].value, nodes_[b].value)});
}

Tape::Id Tape::mean_row_sq_diff(Id a, Id b) {
  const Tensor2& av = nodes_[a].value;
  const Tensor2& bv = nodes_[b].value;
  check(av.same_shape(bv), "mean_row_sq_diff: shape mismatch");
  check(av.rows > 0, "mean_row_sq_diff: empty batch");
  Tensor2 out(1, 1);
  out.data[0] =
      kern::ops().sq_diff_sum(av.data.data(), bv.data.data(), av.size()) /
      static_cast<double>(av.rows);
  return push({Op::mean_row_sq_diff, a, b, 0.0, 0, 0, {}, {}, std::move(out)});
}

Tape::Id Tape::sum_sq(Id a) {
  Tensor2 out(1, 1);
  const Tensor2& av = nodes_[a].value;
  out.data[0] = kern::ops().sq_sum(av.data.data(), av.size());
  return push({Op::sum_sq, a, -1, 0.0, 0, 0, {}, {}, std::move(out)});
}

Tape::Id Tape::weighted_sum(std::span<const Id> terms, std::span<const double> weights) {
  check(terms.size() == weights.size() && !terms.empty(), "weighted_sum: bad arity");
  Tensor2 out(1, 1);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    check(nodes_[terms[i]].value.size() == 1, "weighted_sum: non-scalar term");
    out.data[0] += weights[i] * nodes_[terms[i]].value.data[0];
  }
  Node n{Op::weighted_sum, -1, -1, 0.0, 0, 0,
         std::vector<Id>(terms.begin(), terms.end()),
         std::vector<double>(weights.begin(), weights.end()), std::move(out)};
  return push(std::move(n));
}

const Tensor2& Tape::grad(Id id) const {
  if (static_cast<std::size_t>(id) < grads_.size() && grads_[id].size() > 0)
    return grads_[id];
  zero_ = Tensor2(nodes_[id].value.rows, nodes_[id].value.cols);
  return zero_;
}

void Tape::backward(Id root, double seed) {
  if (consumed_) throw std::logic_error("tape already consumed by backward()");
  consumed_ = true;
  check(nodes_[root].value.size() == 1, "backward: root must be scalar");

  grads_.assign(nodes_.size(), Tensor2());
  grads_[root] = Tensor2(1, 1);
  grads_[root].data[0] = seed;

  auto ensure = [&](Id id) -> Tensor2& {
    Tensor2& g = grads_[id];
    if (g.size() == 0) g = Tensor2(nodes_[id].value.rows, nodes_[id].value.cols);
    return g;
  };
  const auto& K = kern::ops();

  for (Id i = root; i >= 0; --i) {
    Node& n = nodes_[i];
    const Tensor2& g = grads_[i];
    if (g.size() == 0) continue;

    switch (n.op) {
      case Op::leaf:
      case Op::constant:
        break;
      case Op::matmul_nt: {
        // y = x * w^T;  dx += g * w;  dw += g^T * x
        const Tensor2& x = nodes_[n.a].value;
        const Tensor2& w = nodes_[n.b].value;
        Tensor2& gx = ensure(n.a);
        K.gemm_nn(g.data.data(), w.data.data(), gx.data.data(), g.rows, g.cols,
                  w.cols, true);
        Tensor2& gw = ensure(n.b);
        K.gemm_tn(g.data.data(), x.data.data(), gw.data.data(), g.rows, g.cols,
                  x.cols, true);
        break;
      }
      case Op::matmul: {
        // y = a * b;  da += g * b^T;  db += a^T * g
        const Tensor2& a = nodes_[n.a].value;
        const Tensor2& b = nodes_[n.b].value;
        Tensor2& ga = ensure(n.a);
        K.gemm_nt(g.data.data(), b.data.data(), ga.data.data(), g.rows, b.rows,
                  g.cols, true);
        Tensor2& gb = ensure(n.b);
        K.gemm_tn(a.data.data(), g.data.data(), gb.data.data(), a.rows, a.cols,
                  g.cols, true);
        break;
      }
      case Op::add: {
        Tensor2& ga = ensure(n.a);
        K.axpy(ga.data.data(), 1.0, g.data.data(), g.size());
        Tensor2& gb = ensure(n.b);
        K.axpy(gb.data.data(), 1.0, g.data.data(), g.size());
        break;
      }
      case Op::sub: {
        Tensor2& ga = ensure(n.a);
        K.axpy(ga.data.data(), 1.0, g.data.data(), g.size());
        Tensor2& gb = ensure(n.b);
        K.axpy(gb.data.data(), -1.0, g.data.data(), g.size());
        break;
      }
      case Op::scale: {
        Tensor2& ga = ensure(n.a);
        K.axpy(ga.data.data(), n.c, g.data.data(), g.size());
        break;
      }
      case Op::add_bias: {
        Tensor2& gx = ensure(n.a);
        K.axpy(gx.data.data(), 1.0, g.data.data(), g.size());
        Tensor2& gb = ensure(n.b);
        K.col_sum(g.data.data(), gb.data.data(), g.rows, g.cols, true);
        break;
      }
      case Op::tanh_act: {
        Tensor2& gx = ensure(n.a);
        K.tanh_bwd(gx.data.data(), g.data.data(), n.value.data.data(), g.size());
        break;
      }
      case Op::slice_cols: {
        Tensor2& gx = ensure(n.a);
        for (std::size_t r = 0; r < g.rows; ++r)
          for (std::size_t j = 0; j < g.cols; ++j) gx.at(r, n.c0 + j) += g.at(r, j);
        break;
      }
      case Op::concat_cols: {
        const std::size_t ca = nodes_[n.a].value.cols;
        Tensor2& ga = ensure(n.a);
        Tensor2& gb = ensure(n.b);
        for (std::size_t r = 0; r < g.rows; ++r) {
          for (std::size_t j = 0; j < ca; ++j) ga.at(r, j) += g.at(r, j);
          for (std::size_t j = ca; j < g.cols; ++j) gb.at(r, j - ca) += g.at(r, j);
        }
        break;
      }
      case Op::kron: {
        const Tensor2& a = nodes_[n.a].value;
        const Tensor2& b = nodes_[n.b].value;
        Tensor2& ga = ensure(n.a);
        Tensor2& gb = ensure(n.b);
        for (std::size_t i2 = 0; i2 < a.rows; ++i2)
          for (std::size_t j2 = 0; j2 < a.cols; ++j2) {
            const double av = a.at(i2, j2);
            double acc = 0.0;
            for (std::size_t p = 0; p < b.rows; ++p) {
              const double* grow = g.row(i2 * b.rows + p) + j2 * b.cols;
              const double* brow = b.row(p);
              double* gbrow = gb.row(p);
              for (std::size_t q = 0; q < b.cols; ++q) {
                acc += grow[q] * brow[q];
                gbrow[q] += grow[q] * av;
              }
            }
            ga.at(i2, j2) += acc;
          }
        break;
      }
      case Op::mean_row_sq_diff: {
        const Tensor2& a = nodes_[n.a].value;
        const Tensor2& b = nodes_[n.b].value;
        const double f = 2.0 * g.data[0] / static_cast<double>(a.rows);
        Tensor2& ga = ensure(n.a);
        Tensor2& gb = ensure(n.b);
        for (std::size_t t = 0; t < a.size(); ++t) {
          const double d = f * (a.data[t] - b.data[t]);
          ga.data[t] += d;
          gb.data[t] -= d;
        }
        break;
      }
      case Op::sum_sq: {
        const Tensor2& a = nodes_[n.a].value;
        Tensor2& ga = ensure(n.a);
        K.axpy(ga.data.data(), 2.0 * g.data[0], a.data.data(), a.size());
        break;
      }
      case Op::weighted_sum: {
        for (std::size_t t = 0; t < n.terms.size(); ++t) {
          Tensor2& gt = ensure(n.terms[t]);
          gt.data[0] += n.weights[t] * g.data[0];
        }
        break;
      }
    }
  }
}

}  // namespace repnet
