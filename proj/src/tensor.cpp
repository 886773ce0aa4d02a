#include "repnet/tensor.hpp"

#include <cmath>
#include <stdexcept>

#include "repnet/kernels.hpp"

namespace repnet {

Tensor2 Tensor2::identity(std::size_t n) {
  Tensor2 t(n, n);
  for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

Tensor2 Tensor2::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  Tensor2 t(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("ragged initializer");
    std::size_t j = 0;
    for (double v : row) t.at(i, j++) = v;
    ++i;
  }
  return t;
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dims differ");
  Tensor2 c(a.rows, b.cols);
  kern::ops().gemm_nn(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols,
                      b.cols, false);
  return c;
}

Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b) {
  if (a.cols != b.cols) throw std::invalid_argument("matmul_nt: inner dims differ");
  Tensor2 c(a.rows, b.rows);
  kern::ops().gemm_nt(a.data.data(), b.data.data(), c.data.data(), a.rows, b.rows,
                      a.cols, false);
  return c;
}

Tensor2 add(const Tensor2& a, const Tensor2& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("add: shape mismatch");
  Tensor2 c(a.rows, a.cols);
  kern::ops().vadd(c.data.data(), a.data.data(), b.data.data(), a.size());
  return c;
}

Tensor2 sub(const Tensor2& a, const Tensor2& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("sub: shape mismatch");
  Tensor2 c(a.rows, a.cols);
  kern::ops().vsub(c.data.data(), a.data.data(), b.data.data(), a.size());
  return c;
}

Tensor2 scale(const Tensor2& a, double c) {
  Tensor2 r(a.rows, a.cols);
  kern::ops().vscale(r.data.data(), a.data.data(), c, a.size());
  return r;
}

Tensor2 kron(const Tensor2& a, const Tensor2& b) {
  Tensor2 c(a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      const double av = a.at(i, j);
      if (av == 0.0) continue;
      for (std::size_t p = 0; p < b.rows; ++p) {
        double* crow = c.row(i * b.rows + p) + j * b.cols;
        const double* brow = b.row(p);
        for (std::size_t q = 0; q < b.cols; ++q) crow[q] += av * brow[q];
      }
    }
  return c;
}

Tensor2 block_diag(const Tensor2& a, const Tensor2& b) {
  Tensor2 c(a.rows + b.rows, a.cols + b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) c.at(i, j) = a.at(i, j);
  for (std::size_t i = 0; i < b.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) c.at(a.rows + i, a.cols + j) = b.at(i, j);
  return c;
}

Tensor2 transpose(const Tensor2& a) {
  Tensor2 t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

double frobenius(const Tensor2& a) {
  return std::sqrt(kern::ops().sq_sum(a.data.data(), a.size()));
}

double max_abs_diff(const Tensor2& a, const Tensor2& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

bool all_finite(const Tensor2& a) {
  for (double v : a.data)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace repnet
