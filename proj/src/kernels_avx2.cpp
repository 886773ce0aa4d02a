// AVX2+FMA variants. Compiled with -mavx2 -mfma; only reached when cpuid
// reports support, so no illegal-instruction risk on older hosts.

#include "repnet/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace repnet::kern {
namespace avx2 {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot(const double* x, const double* y, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= len; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) s += x[i] * y[i];
  return s;
}

void gemm_nt(const double* a, const double* b, double* c,
             std::size_t m, std::size_t n, std::size_t k, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    std::size_t j = 0;
    // Four dot products at a time sharing the A-row loads.
    for (; j + 4 <= n; j += 4) {
      const double* b0 = b + (j + 0) * k;
      const double* b1 = b + (j + 1) * k;
      const double* b2 = b + (j + 2) * k;
      const double* b3 = b + (j + 3) * k;
      __m256d s0 = _mm256_setzero_pd();
      __m256d s1 = _mm256_setzero_pd();
      __m256d s2 = _mm256_setzero_pd();
      __m256d s3 = _mm256_setzero_pd();
      std::size_t t = 0;
      for (; t + 4 <= k; t += 4) {
        const __m256d va = _mm256_loadu_pd(ai + t);
        s0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b0 + t), s0);
        s1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b1 + t), s1);
        s2 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b2 + t), s2);
        s3 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b3 + t), s3);
      }
      double d0 = hsum(s0), d1 = hsum(s1), d2 = hsum(s2), d3 = hsum(s3);
      for (; t < k; ++t) {
        const double av = ai[t];
        d0 += av * b0[t];
        d1 += av * b1[t];
        d2 += av * b2[t];
        d3 += av * b3[t];
      }
      double* cij = c + i * n + j;
      if (accumulate) {
        cij[0] += d0; cij[1] += d1; cij[2] += d2; cij[3] += d3;
      } else {
        cij[0] = d0; cij[1] = d1; cij[2] = d2; cij[3] = d3;
      }
    }
    for (; j < n; ++j) {
      const double s = dot(ai, b + j * k, k);
      double* cij = c + i * n + j;
      *cij = accumulate ? *cij + s : s;
    }
  }
}

inline void row_axpy(double* y, double a, const double* x, std::size_t len) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < len; ++i) y[i] += a * x[i];
}

void gemm_nn(const double* a, const double* b, double* c,
             std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    if (!accumulate) std::memset(ci, 0, n * sizeof(double));
    const double* ai = a + i * k;
    for (std::size_t t = 0; t < k; ++t) row_axpy(ci, ai[t], b + t * n, n);
  }
}

void gemm_tn(const double* a, const double* b, double* c,
             std::size_t r, std::size_t m, std::size_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t t = 0; t < r; ++t) {
    const double* at = a + t * m;
    const double* bt = b + t * n;
    for (std::size_t i = 0; i < m; ++i) row_axpy(c + i * n, at[i], bt, n);
  }
}

void axpy(double* y, double a, const double* x, std::size_t len) {
  row_axpy(y, a, x, len);
}

void vadd(double* z, const double* x, const double* y, std::size_t len) {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4)
    _mm256_storeu_pd(z + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < len; ++i) z[i] = x[i] + y[i];
}

void vsub(double* z, const double* x, const double* y, std::size_t len) {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4)
    _mm256_storeu_pd(z + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < len; ++i) z[i] = x[i] - y[i];
}

void vscale(double* y, const double* x, double c, std::size_t len) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(vc, _mm256_loadu_pd(x + i)));
  for (; i < len; ++i) y[i] = c * x[i];
}

void tanh_bwd(double* dx, const double* dy, const double* y, std::size_t len) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d sech2 = _mm256_fnmadd_pd(vy, vy, one);  // 1 - y*y
    __m256d vdx = _mm256_loadu_pd(dx + i);
    vdx = _mm256_fmadd_pd(_mm256_loadu_pd(dy + i), sech2, vdx);
    _mm256_storeu_pd(dx + i, vdx);
  }
  for (; i < len; ++i) dx[i] += dy[i] * (1.0 - y[i] * y[i]);
}

double sq_sum(const double* x, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(x + i);
    const __m256d v1 = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; i + 4 <= len; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) s += x[i] * x[i];
  return s;
}

double sq_diff_sum(const double* x, const double* y, std::size_t len) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < len; ++i) {
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
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4)
      _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_loadu_pd(out + j), _mm256_loadu_pd(ai + j)));
    for (; j < cols; ++j) out[j] += ai[j];
  }
}

void adam_step(double* p, double* m, double* v, const double* g, std::size_t len,
               double lr, double beta1, double beta2, double eps,
               double inv_bc1, double inv_bc2) {
  const __m256d vb1 = _mm256_set1_pd(beta1);
  const __m256d vb2 = _mm256_set1_pd(beta2);
  const __m256d vo1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d vo2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m256d vc1 = _mm256_set1_pd(inv_bc1);
  const __m256d vc2 = _mm256_set1_pd(inv_bc2);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d vg = _mm256_loadu_pd(g + i);
    __m256d vm = _mm256_loadu_pd(m + i);
    __m256d vv = _mm256_loadu_pd(v + i);
    vm = _mm256_fmadd_pd(vb1, vm, _mm256_mul_pd(vo1, vg));
    vv = _mm256_fmadd_pd(vb2, vv, _mm256_mul_pd(vo2, _mm256_mul_pd(vg, vg)));
    _mm256_storeu_pd(m + i, vm);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_mul_pd(vm, vc1);
    const __m256d vhat = _mm256_mul_pd(vv, vc2);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
    const __m256d upd = _mm256_div_pd(_mm256_mul_pd(vlr, mhat), denom);
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), upd));
  }
  for (; i < len; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    p[i] -= lr * (m[i] * inv_bc1) / (std::sqrt(v[i] * inv_bc2) + eps);
  }
}

void sgd_step(double* p, const double* g, std::size_t len, double lr) {
  const __m256d vlr = _mm256_set1_pd(lr);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d vp = _mm256_loadu_pd(p + i);
    vp = _mm256_fnmadd_pd(vlr, _mm256_loadu_pd(g + i), vp);
    _mm256_storeu_pd(p + i, vp);
  }
  for (; i < len; ++i) p[i] -= lr * g[i];
}

}  // namespace avx2

const Ops* avx2_ops_table() {
  static const Ops table = {
      "avx2",
      avx2::gemm_nt, avx2::gemm_nn, avx2::gemm_tn,
      avx2::dot,     avx2::axpy,    avx2::vadd,
      avx2::vsub,    avx2::vscale,  avx2::tanh_bwd,
      avx2::sq_sum,  avx2::sq_diff_sum, avx2::col_sum,
      avx2::adam_step, avx2::sgd_step,
  };
  return &table;
}

}  // namespace repnet::kern

#endif  // x86_64
