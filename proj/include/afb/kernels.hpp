#pragma once

// Dense complex kernels used by CMatrix. Every kernel has a scalar reference
// implementation and an AVX2 variant; the active one is picked at runtime
// from CPU capabilities (override with AFB_KERNEL_ISA=scalar|avx2).
// Layout is row-major interleaved (std::complex<double>).

#include <complex>
#include <cstddef>

namespace afb::kernels {

using cd = std::complex<double>;

enum class Isa { Scalar, Avx2 };

bool avx2_supported();
Isa active_isa();
void set_isa(Isa isa);

// C = A * B, A is m x k, B is k x n, C is m x n (overwritten).
void matmul(const cd* A, const cd* B, cd* C, int m, int k, int n);
void matmul_scalar(const cd* A, const cd* B, cd* C, int m, int k, int n);
void matmul_avx2(const cd* A, const cd* B, cd* C, int m, int k, int n);

// y += alpha * x
void axpy(cd alpha, const cd* x, cd* y, std::size_t n);
void axpy_scalar(cd alpha, const cd* x, cd* y, std::size_t n);
void axpy_avx2(cd alpha, const cd* x, cd* y, std::size_t n);

// sum of |x_i|^2
double norm2_sq(const cd* x, std::size_t n);
double norm2_sq_scalar(const cd* x, std::size_t n);
double norm2_sq_avx2(const cd* x, std::size_t n);

} // namespace afb::kernels
