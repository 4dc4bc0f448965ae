#include "afb/kernels.hpp"

#ifdef AFB_BUILD_AVX2
#include <immintrin.h>
#endif

namespace afb::kernels {

bool avx2_supported() {
#ifdef AFB_BUILD_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#ifdef AFB_BUILD_AVX2

namespace {

// One __m256d holds two complex doubles [re0, im0, re1, im1].
// (ar + i*ai) * b for a pair of b's:
//   t1 = ar * [br, bi, ...]
//   t2 = ai * [bi, br, ...]
//   addsub(t1, t2) = [ar*br - ai*bi, ar*bi + ai*br, ...]
inline __m256d cmul_broadcast(__m256d are, __m256d aim, __m256d b) {
  __m256d bswap = _mm256_permute_pd(b, 0b0101);
  return _mm256_addsub_pd(_mm256_mul_pd(are, b), _mm256_mul_pd(aim, bswap));
}

} // namespace

void matmul_avx2(const cd* A, const cd* B, cd* C, int m, int k, int n) {
  const double* b = reinterpret_cast<const double*>(B);
  double* c = reinterpret_cast<double*>(C);
  const int n2 = (n / 2) * 2;
  for (int i = 0; i < m; ++i) {
    double* crow = c + std::size_t(i) * n * 2;
    for (int j = 0; j < 2 * n; ++j) crow[j] = 0.0;
    const cd* arow = A + std::size_t(i) * k;
    for (int l = 0; l < k; ++l) {
      const double ar = arow[l].real(), ai = arow[l].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const __m256d are = _mm256_set1_pd(ar);
      const __m256d aim = _mm256_set1_pd(ai);
      const double* brow = b + std::size_t(l) * n * 2;
      int j = 0;
      for (; j < n2; j += 2) {
        __m256d bv = _mm256_loadu_pd(brow + 2 * j);
        __m256d cv = _mm256_loadu_pd(crow + 2 * j);
        cv = _mm256_add_pd(cv, cmul_broadcast(are, aim, bv));
        _mm256_storeu_pd(crow + 2 * j, cv);
      }
      for (; j < n; ++j) {
        const double br = brow[2 * j], bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void axpy_avx2(cd alpha, const cd* x, cd* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  const __m256d are = _mm256_set1_pd(ar);
  const __m256d aim = _mm256_set1_pd(ai);
  const double* xv = reinterpret_cast<const double*>(x);
  double* yv = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  const std::size_t n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d b = _mm256_loadu_pd(xv + 2 * i);
    __m256d c = _mm256_loadu_pd(yv + 2 * i);
    c = _mm256_add_pd(c, cmul_broadcast(are, aim, b));
    _mm256_storeu_pd(yv + 2 * i, c);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double norm2_sq_avx2(const cd* x, std::size_t n) {
  const double* xv = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t n2 = (n / 2) * 2;
  for (; i < n2; i += 2) {
    __m256d v = _mm256_loadu_pd(xv + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i)
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

#else

void matmul_avx2(const cd* A, const cd* B, cd* C, int m, int k, int n) {
  matmul_scalar(A, B, C, m, k, n);
}
void axpy_avx2(cd alpha, const cd* x, cd* y, std::size_t n) {
  axpy_scalar(alpha, x, y, n);
}
double norm2_sq_avx2(const cd* x, std::size_t n) {
  return norm2_sq_scalar(x, n);
}

#endif

} // namespace afb::kernels
