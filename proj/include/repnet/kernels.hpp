#pragma once

#include <cstddef>

namespace repnet::kern {

// Dense double-precision kernels over row-major buffers. Every entry point
// exists in a scalar reference form and, on x86-64 with AVX2+FMA, in a
// vectorized form; the active table is chosen once at startup from cpuid.
// All implementations reduce in a fixed order, so results are reproducible
// for a given table.
struct Ops {
  const char* name;

  // C (m x n) = A (m x k) * B(n x k)^T, optionally accumulating into C.
  void (*gemm_nt)(const double* a, const double* b, double* c,
                  std::size_t m, std::size_t n, std::size_t k, bool accumulate);
  // C (m x n) = A (m x k) * B (k x n).
  void (*gemm_nn)(const double* a, const double* b, double* c,
                  std::size_t m, std::size_t k, std::size_t n, bool accumulate);
  // C (m x n) = A(r x m)^T * B (r x n).
  void (*gemm_tn)(const double* a, const double* b, double* c,
                  std::size_t r, std::size_t m, std::size_t n, bool accumulate);

  double (*dot)(const double* x, const double* y, std::size_t len);
  void (*axpy)(double* y, double a, const double* x, std::size_t len);
  void (*vadd)(double* z, const double* x, const double* y, std::size_t len);
  void (*vsub)(double* z, const double* x, const double* y, std::size_t len);
  void (*vscale)(double* y, const double* x, double c, std::size_t len);

  // dx += dy * (1 - y^2), with y the tanh output.
  void (*tanh_bwd)(double* dx, const double* dy, const double* y, std::size_t len);

  double (*sq_sum)(const double* x, std::size_t len);
  double (*sq_diff_sum)(const double* x, const double* y, std::size_t len);

  // out (n) = column sums of A (rows x n).
  void (*col_sum)(const double* a, double* out, std::size_t rows, std::size_t cols,
                  bool accumulate);

  // Adam update; inv_bc1/inv_bc2 are the precomputed 1/(1-beta^t) corrections.
  void (*adam_step)(double* p, double* m, double* v, const double* g, std::size_t len,
                    double lr, double beta1, double beta2, double eps,
                    double inv_bc1, double inv_bc2);
  void (*sgd_step)(double* p, const double* g, std::size_t len, double lr);
};

const Ops& ops();          // active table
const Ops& scalar_ops();   // reference implementation
const Ops* avx2_ops();     // nullptr when not compiled in or not supported
void force_scalar(bool on);

}  // namespace repnet::kern
