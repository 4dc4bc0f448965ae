#include "afb/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace afb::kernels {

namespace {

Isa resolve_isa() {
  if (const char* env = std::getenv("AFB_KERNEL_ISA")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Isa::Avx2;
  }
  return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

Isa g_isa = resolve_isa();

} // namespace

Isa active_isa() { return g_isa; }

void set_isa(Isa isa) {
  g_isa = (isa == Isa::Avx2 && !avx2_supported()) ? Isa::Scalar : isa;
}

void matmul_scalar(const cd* A, const cd* B, cd* C, int m, int k, int n) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) C[std::size_t(i) * n + j] = cd(0.0, 0.0);
  for (int i = 0; i < m; ++i) {
    const cd* arow = A + std::size_t(i) * k;
    cd* crow = C + std::size_t(i) * n;
    for (int l = 0; l < k; ++l) {
      const cd a = arow[l];
      if (a == cd(0.0, 0.0)) continue;
      const cd* brow = B + std::size_t(l) * n;
      for (int j = 0; j < n; ++j) crow[j] += a * brow[j];
    }
  }
}

void axpy_scalar(cd alpha, const cd* x, cd* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double norm2_sq_scalar(const cd* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void matmul(const cd* A, const cd* B, cd* C, int m, int k, int n) {
  if (g_isa == Isa::Avx2)
    matmul_avx2(A, B, C, m, k, n);
  else
    matmul_scalar(A, B, C, m, k, n);
}

void axpy(cd alpha, const cd* x, cd* y, std::size_t n) {
  if (g_isa == Isa::Avx2)
    axpy_avx2(alpha, x, y, n);
  else
    axpy_scalar(alpha, x, y, n);
}

double norm2_sq(const cd* x, std::size_t n) {
  return g_isa == Isa::Avx2 ? norm2_sq_avx2(x, n) : norm2_sq_scalar(x, n);
}

} // namespace afb::kernels
