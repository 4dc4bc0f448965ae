#pragma once

// Hermitian eigensolver (cyclic complex Jacobi), SVD via the Hermitian
// doubling [[0, A*],[A, 0]], operator norms, and continuous functional
// calculus with declared cut points. Matrices here are small (a few hundred
// rows at most), where Jacobi is accurate and has no tie-breaking ambiguity.

#include <functional>
#include <optional>
#include <vector>

#include "afb/cmatrix.hpp"

namespace afb {

// A = V diag(lambda) V*, lambda ascending.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  CMatrix vectors;  // columns
};

SpectralDecomposition eig_hermitian(const CMatrix& a);

// A = U diag(sigma) V*, sigma descending, U/V with min(m,n) columns.
struct SvdResult {
  std::vector<double> sigma;
  CMatrix u, v;
};

SvdResult svd(const CMatrix& a);

double op_norm(const CMatrix& a);

// Scalar function with optional cut points: an eigenvalue landing within
// `gap` of a cut point is an error (the function jumps there).
struct ScalarFn {
  std::function<double(double)> f;
  struct Cut {
    double point;
    double gap;
  };
  std::vector<Cut> cuts;
};

// f(A) for self-adjoint A; rejects inputs that are not self-adjoint within
// `sa_tol` (operator norm), or whose spectrum violates a declared cut.
CMatrix functional_calculus(const CMatrix& a, const ScalarFn& fn,
                            double sa_tol = 1e-9);

// Orthonormal columns spanning the eigenspaces of the projection-like
// matrix `p` with eigenvalue > 1/2. Rank must equal `rank` if >= 0.
CMatrix range_frame(const CMatrix& p, int rank = -1);

} // namespace afb
