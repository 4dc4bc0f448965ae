#include "afb/random.hpp"

#include <cmath>

#include "afb/eig.hpp"

namespace afb {

CMatrix gaussian_matrix(Rng& rng, int rows, int cols) {
  CMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      a.at(i, j) = cd(rng.next_gaussian(), rng.next_gaussian());
  return a;
}

CMatrix haar_unitary(Rng& rng, int n) {
  if (n == 0) return CMatrix(0, 0);
  CMatrix a = gaussian_matrix(rng, n, n);
  // Modified Gram-Schmidt; dividing each column by a unit multiple of its
  // R-diagonal entry (sign fix) makes the distribution exactly Haar.
  CMatrix q(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<cd> col(n);
    for (int i = 0; i < n; ++i) col[i] = a.at(i, j);
    for (int rep = 0; rep < 2; ++rep)
      for (int p = 0; p < j; ++p) {
        cd ip(0, 0);
        for (int i = 0; i < n; ++i) ip += std::conj(q.at(i, p)) * col[i];
        for (int i = 0; i < n; ++i) col[i] -= ip * q.at(i, p);
      }
    double nn = 0;
    for (const cd& z : col) nn += std::norm(z);
    const double inv = 1.0 / std::sqrt(nn);
    // R diagonal before normalization is the projection of the original
    // column onto the new direction; its phase is divided out.
    cd r(0, 0);
    for (int i = 0; i < n; ++i) r += std::conj(col[i] * inv) * a.at(i, j);
    cd phase = std::abs(r) > 0 ? r / std::abs(r) : cd(1, 0);
    for (int i = 0; i < n; ++i) q.at(i, j) = col[i] * inv / phase;
  }
  return q;
}

CMatrix haar_even_unitary(Rng& rng, const GradedSpace& w) {
  CMatrix u0 = haar_unitary(rng, w.dim0());
  CMatrix u1 = haar_unitary(rng, w.dim1());
  return CMatrix::direct_sum(u0, u1);
}

CMatrix gaussian_hermitian(Rng& rng, int n) {
  CMatrix a = gaussian_matrix(rng, n, n);
  return (a + a.adjoint()) * cd(0.5, 0.0);
}

CMatrix even_unitary_step(Rng& rng, const GradedSpace& w, double dist) {
  const int n = w.dim();
  if (dist <= 0.0 || n == 0) return CMatrix::identity(n);
  CMatrix h = CMatrix::direct_sum(gaussian_hermitian(rng, w.dim0()),
                                  gaussian_hermitian(rng, w.dim1()));
  const double hnorm = op_norm(h);
  if (hnorm < 1e-300) return CMatrix::identity(n);
  // || exp(iHt) - 1 || = 2 sin(t*||H||/2) for t*||H|| <= pi
  const double theta = 2.0 * std::asin(std::min(dist / 2.0, 1.0));
  SpectralDecomposition e = eig_hermitian(h * cd(1.0 / hnorm, 0.0));
  CMatrix d(n, n);
  for (int i = 0; i < n; ++i) {
    const double phi = theta * e.eigenvalues[i];
    d.at(i, i) = cd(std::cos(phi), std::sin(phi));
  }
  return e.vectors * d * e.vectors.adjoint();
}

} // namespace afb
