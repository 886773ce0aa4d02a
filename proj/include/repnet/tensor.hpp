#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace repnet {

// Dense row-major matrix of doubles. A batch of samples is stored with one
// sample per row.
struct Tensor2 {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Tensor2() = default;
  Tensor2(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  static Tensor2 identity(std::size_t n);
  static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows);

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  std::size_t size() const { return data.size(); }
  bool same_shape(const Tensor2& o) const { return rows == o.rows && cols == o.cols; }
};

Tensor2 matmul(const Tensor2& a, const Tensor2& b);     // a (m x k) * b (k x n)
Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b);  // a (m x k) * b(n x k)^T
Tensor2 add(const Tensor2& a, const Tensor2& b);
Tensor2 sub(const Tensor2& a, const Tensor2& b);
Tensor2 scale(const Tensor2& a, double c);
Tensor2 kron(const Tensor2& a, const Tensor2& b);
Tensor2 block_diag(const Tensor2& a, const Tensor2& b);
Tensor2 transpose(const Tensor2& a);
double frobenius(const Tensor2& a);
double max_abs_diff(const Tensor2& a, const Tensor2& b);
bool all_finite(const Tensor2& a);

}  // namespace repnet
