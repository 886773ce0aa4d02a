#include "repnet/extract.hpp"

#include <cmath>
#include <stdexcept>

#include "repnet/compile.hpp"
#include "repnet/kernels.hpp"

namespace repnet {

AffineMap collapse(const GeneratorNet& net) {
  if (net.regime == Regime::nonlinear)
    throw std::invalid_argument("collapse: nonlinear net " + net.name +
                                " has no matrix form");
  validate_net(net);

  // Walk the chain bottom-up: y = W_L(...(W_1 x + b_1)...) + b_L.
  AffineMap acc;
  acc.m = Tensor2::identity(net.in_width);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    acc.m = matmul(net.weights[l], acc.m);
    if (!acc.offset.empty()) {
      std::vector<double> shifted(net.layers[l].out_dim, 0.0);
      kern::ops().gemm_nn(net.weights[l].data.data(), acc.offset.data(), shifted.data(),
                          net.layers[l].out_dim, net.layers[l].in_dim, 1, false);
      acc.offset = std::move(shifted);
    }
    if (net.layers[l].use_bias) {
      if (acc.offset.empty()) acc.offset.assign(net.layers[l].out_dim, 0.0);
      for (std::size_t j = 0; j < acc.offset.size(); ++j)
        acc.offset[j] += net.biases[l][j];
    }
  }
  return acc;
}

Tensor2 apply(const AffineMap& f, const Tensor2& x) {
  Tensor2 y = matmul_nt(x, f.m);
  if (!f.offset.empty())
    for (std::size_t r = 0; r < y.rows; ++r)
      kern::ops().axpy(y.row(r), 1.0, f.offset.data(), y.cols);
  return y;
}

AffineMap compose(const AffineMap& after, const AffineMap& first) {
  if (after.in_width() != first.out_width())
    throw std::invalid_argument("compose: width mismatch");
  AffineMap out;
  out.m = matmul(after.m, first.m);
  if (!first.offset.empty()) {
    out.offset.assign(after.out_width(), 0.0);
    kern::ops().gemm_nn(after.m.data.data(), first.offset.data(), out.offset.data(),
                        after.out_width(), after.in_width(), 1, false);
  }
  if (!after.offset.empty()) {
    if (out.offset.empty()) out.offset.assign(after.out_width(), 0.0);
    for (std::size_t j = 0; j < out.offset.size(); ++j) out.offset[j] += after.offset[j];
  }
  return out;
}

AffineMap direct_sum(const AffineMap& a, const AffineMap& b) {
  AffineMap out;
  out.m = block_diag(a.m, b.m);
  if (!a.offset.empty() || !b.offset.empty()) {
    out.offset.assign(a.out_width() + b.out_width(), 0.0);
    for (std::size_t j = 0; j < a.offset.size(); ++j) out.offset[j] = a.offset[j];
    for (std::size_t j = 0; j < b.offset.size(); ++j)
      out.offset[a.out_width() + j] = b.offset[j];
  }
  return out;
}

AffineMap kron_map(const AffineMap& a, const AffineMap& b) {
  if (!a.linear() || !b.linear())
    throw std::invalid_argument("kron_map: offsets must be zero");
  AffineMap out;
  out.m = kron(a.m, b.m);
  return out;
}

AffineMap add_maps(const AffineMap& a, const AffineMap& b) {
  AffineMap out;
  out.m = add(a.m, b.m);
  if (!a.offset.empty() || !b.offset.empty()) {
    out.offset.assign(a.out_width(), 0.0);
    for (std::size_t j = 0; j < a.offset.size(); ++j) out.offset[j] += a.offset[j];
    for (std::size_t j = 0; j < b.offset.size(); ++j) out.offset[j] += b.offset[j];
  }
  return out;
}

AffineMap scale_map(const AffineMap& a, double c) {
  AffineMap out;
  out.m = scale(a.m, c);
  if (!a.offset.empty()) {
    out.offset.resize(a.offset.size());
    for (std::size_t j = 0; j < a.offset.size(); ++j) out.offset[j] = c * a.offset[j];
  }
  return out;
}

AffineMap identity_map(std::size_t width) {
  AffineMap out;
  out.m = Tensor2::identity(width);
  return out;
}

double map_distance(const AffineMap& a, const AffineMap& b) {
  if (!a.m.same_shape(b.m)) throw std::invalid_argument("map_distance: shape mismatch");
  double s = kern::ops().sq_diff_sum(a.m.data.data(), b.m.data.data(), a.m.size());
  const std::size_t w = a.out_width();
  for (std::size_t j = 0; j < w; ++j) {
    const double oa = j < a.offset.size() ? a.offset[j] : 0.0;
    const double ob = j < b.offset.size() ? b.offset[j] : 0.0;
    s += (oa - ob) * (oa - ob);
  }
  return std::sqrt(s);
}

Tensor2 gauss_inverse(const Tensor2& a) {
  if (a.rows != a.cols) throw std::invalid_argument("gauss_inverse: not square");
  const std::size_t n = a.rows;
  Tensor2 work = a;
  Tensor2 inv = Tensor2::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(work.at(r, col)) > std::abs(work.at(pivot, col))) pivot = r;
    if (std::abs(work.at(pivot, col)) < 1e-12)
      throw std::invalid_argument("gauss_inverse: matrix is singular");
    if (pivot != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work.at(pivot, j), work.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    const double d = work.at(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work.at(col, j) /= d;
      inv.at(col, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = work.at(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work.at(r, j) -= f * work.at(col, j);
        inv.at(r, j) -= f * inv.at(col, j);
      }
    }
  }
  return inv;
}

LinearRep collapse_all(const Presentation& p, const NetMap& nets) {
  LinearRep rep;
  rep.semantics = p.semantics;
  for (const auto& [name, net] : nets) {
    rep.block_dim = net.block_dim;
    rep.maps.emplace(name, collapse(net));
  }
  (void)p;
  return rep;
}

std::vector<std::pair<std::string, double>> verify_matrix_relations(
    const LinearRep& rep, const Presentation& p, bool complete_inverses) {
  validate(p);
  std::map<std::string, AffineMap> maps = rep.maps;
  for (const auto& g : p.generators) {
    if (!maps.count(g.name))
      throw std::invalid_argument("no matrix supplied for generator " + g.name);
    if (g.invertible && !maps.count(g.inverse_name)) {
      if (!complete_inverses)
        throw std::invalid_argument("no matrix supplied for inverse " + g.inverse_name);
      const AffineMap& fwd = maps.at(g.name);
      AffineMap inv;
      inv.m = gauss_inverse(fwd.m);
      if (!fwd.offset.empty()) {
        // x -> M^-1 (x - c)
        inv.offset.assign(fwd.in_width(), 0.0);
        kern::ops().gemm_nn(inv.m.data.data(), fwd.offset.data(), inv.offset.data(),
                            inv.m.rows, inv.m.cols, 1, false);
        for (double& v : inv.offset) v = -v;
      }
      maps.emplace(g.inverse_name, std::move(inv));
    }
  }

  std::vector<std::pair<std::string, double>> out;
  for (const auto& r : p.relations) {
    const EvalExpr lhs = lower_expr(*r.lhs, p, rep.block_dim);
    const EvalExpr rhs = lower_expr(*r.rhs, p, rep.block_dim);
    const AffineMap lm = eval_affine(lhs, maps, p.semantics);
    const AffineMap rm = eval_affine(rhs, maps, p.semantics);
    out.emplace_back(r.label, map_distance(lm, rm));
  }
  return out;
}

}  // namespace repnet
