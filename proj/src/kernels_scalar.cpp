#include "repnet/kernels.hpp"

#include <cmath>
#include <cstring>

namespace repnet::kern {
namespace scalar {

void gemm_nt(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += ai[t] * bj[t];
      double* cij = c + i * n + j;
      *cij = accumulate ? *cij + s : s;
    }
  }
}

void gemm_nn(const double* a, const double* b, double* c,
             std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    if (!accumulate) std::memset(ci, 0, n * sizeof(double));
    const double* ai = a + i * k;
    for (std::size_t t = 0; t < k; ++t) {
      const double w = ai[t];
      const double* bt = b + t * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += w * bt[j];
    }
  }
}

void gemm_tn(const double* a, const double* b, double* c,
             std::size_t r, std::size_t m, std::size_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t t = 0; t < r; ++t) {
    const double* at = a + t * m;
    const double* bt = b + t * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double w = at[i];
      double* ci = c + i * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += w * bt[j];
    }
  }
}

double dot(const double* x, const double* y, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double* y, double a, const double* x, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] += a * x[i];
}

void vadd(double* z, const double* x, const double* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) z[i] = x[i] + y[i];
}

void vsub(double* z, const double* x, const double* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) z[i] = x[i] - y[i];
}

void vscale(double* y, const double* x, double c, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] = c * x[i];
}

void tanh_bwd(double* dx, const double* dy, const double* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) dx[i] += dy[i] * (1.0 - y[i] * y[i]);
}

double sq_sum(const double* x, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += x[i] * x[i];
  return s;
}

double sq_diff_sum(const double* x, const double* y, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

void col_sum(const double* a, double* out, std::size_t rows, std::size_t cols,
             bool accumulate) {
  if (!accumulate) std::memset(out, 0, cols * sizeof(double));
  for (std::size_t i = 0; i < rows; ++i) {
    const double* ai = a + i * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] += ai[j];
  }
}

void adam_step(double* p, double* m, double* v, const double* g, std::size_t len,
               double lr, double beta1, double beta2, double eps,
               double inv_bc1, double inv_bc2) {
  for (std::size_t i = 0; i < len; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = m[i] * inv_bc1;
    const double vhat = v[i] * inv_bc2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

void sgd_step(double* p, const double* g, std::size_t len, double lr) {
  for (std::size_t i = 0; i < len; ++i) p[i] -= lr * g[i];
}

}  // namespace scalar

const Ops& scalar_ops() {
  static const Ops table = {
      "scalar",
      scalar::gemm_nt, scalar::gemm_nn, scalar::gemm_tn,
      scalar::dot,     scalar::axpy,    scalar::vadd,
      scalar::vsub,    scalar::vscale,  scalar::tanh_bwd,
      scalar::sq_sum,  scalar::sq_diff_sum, scalar::col_sum,
      scalar::adam_step, scalar::sgd_step,
  };
  return table;
}

}  // namespace repnet::kern
