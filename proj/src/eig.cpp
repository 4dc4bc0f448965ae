#include "afb/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace afb {

namespace {

// One complex Jacobi rotation zeroing a(p,q). The 2x2 block is first
// dephased to a real symmetric block, then rotated classically.
void jacobi_rotate(CMatrix& a, CMatrix& v, int p, int q) {
  const cd apq = a.at(p, q);
  const double g = std::abs(apq);
  if (g < 1e-300) return;
  const cd u = apq / g;  // phase
  const double alpha = a.at(p, p).real();
  const double beta = a.at(q, q).real();
  const double tau = (beta - alpha) / (2.0 * g);
  const double t =
      (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // J has J[p][p]=c, J[p][q]=s, J[q][p]=-conj(u)*s, J[q][q]=conj(u)*c;
  // apply A <- J† A J. The conjugate phase is what makes the transformed
  // (p,q) entry cs(alpha-beta) + g(c^2-s^2), real and genuinely zeroed.
  const cd ub = std::conj(u);
  const int n = a.rows();
  for (int i = 0; i < n; ++i) {
    const cd aip = a.at(i, p), aiq = a.at(i, q);
    a.at(i, p) = aip * c + aiq * (-ub * s);
    a.at(i, q) = aip * s + aiq * (ub * c);
  }
  for (int j = 0; j < n; ++j) {
    const cd apj = a.at(p, j), aqj = a.at(q, j);
    a.at(p, j) = c * apj - s * u * aqj;
    a.at(q, j) = s * apj + u * c * aqj;
  }
  for (int i = 0; i < n; ++i) {
    const cd vip = v.at(i, p), viq = v.at(i, q);
    v.at(i, p) = vip * c + viq * (-ub * s);
    v.at(i, q) = vip * s + viq * (ub * c);
  }
  a.at(p, q) = cd(0.0, 0.0);
  a.at(q, p) = cd(0.0, 0.0);
}

double offdiag_norm(const CMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a.at(i, j));
  return std::sqrt(s);
}

} // namespace

SpectralDecomposition eig_hermitian(const CMatrix& a0) {
  if (a0.rows() != a0.cols()) fail("ShapeMismatch", "eig of non-square");
  const int n = a0.rows();
  CMatrix a = (a0 + a0.adjoint()) * cd(0.5, 0.0);
  CMatrix v = CMatrix::identity(n);
  const double scale = std::max(a.fro_norm(), 1e-300);
  for (int sweep = 0; sweep < 60; ++sweep) {
    if (offdiag_norm(a) <= 1e-14 * scale) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q)
        if (std::abs(a.at(p, q)) > 1e-16 * scale) jacobi_rotate(a, v, p, q);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = a.at(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return d[x] < d[y]; });

  SpectralDecomposition r;
  r.eigenvalues.resize(n);
  r.vectors = CMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    r.eigenvalues[j] = d[order[j]];
    for (int i = 0; i < n; ++i) r.vectors.at(i, j) = v.at(i, order[j]);
  }
  return r;
}

SvdResult svd(const CMatrix& a) {
  const int m = a.rows(), n = a.cols();
  // Hermitian doubling [[0, A*],[A, 0]]: eigenpairs (sigma, (v, u)/sqrt2).
  CMatrix h(m + n, m + n);
  h.set_block(0, n, a.adjoint());
  h.set_block(n, 0, a);
  SpectralDecomposition e = eig_hermitian(h);

  // Positive eigenvalues descending give all sigma > 0; kernel directions of
  // A / A* are recovered from the zero eigenspace afterwards.
  const int k = std::min(m, n);
  SvdResult r;
  r.sigma.assign(k, 0.0);
  r.u = CMatrix(m, k);
  r.v = CMatrix(n, k);
  int got = 0;
  for (int j = m + n - 1; j >= 0 && got < k; --j) {
    const double lam = e.eigenvalues[j];
    if (lam <= 0) break;
    // column j: top n entries ~ v/sqrt2, bottom m entries ~ u/sqrt2
    double nv = 0, nu = 0;
    for (int i = 0; i < n; ++i) nv += std::norm(e.vectors.at(i, j));
    for (int i = 0; i < m; ++i) nu += std::norm(e.vectors.at(n + i, j));
    if (nv < 0.25 || nu < 0.25) continue;  // spurious tiny-positive direction
    r.sigma[got] = lam;
    const double sv = 1.0 / std::sqrt(nv), su = 1.0 / std::sqrt(nu);
    for (int i = 0; i < n; ++i) r.v.at(i, got) = e.vectors.at(i, j) * sv;
    for (int i = 0; i < m; ++i) r.u.at(i, got) = e.vectors.at(n + i, j) * su;
    ++got;
  }
  // Remaining columns (exact/near kernel): complete orthonormal bases of the
  // orthogonal complements via Gram-Schmidt against what we have.
  auto complete = [&](CMatrix& basis, int dimfull, int have) {
    int next = have;
    for (int cand = 0; cand < dimfull && next < k; ++cand) {
      std::vector<cd> col(dimfull, cd(0, 0));
      col[cand] = cd(1, 0);
      for (int rep = 0; rep < 2; ++rep) {
        for (int j = 0; j < next; ++j) {
          cd ip(0, 0);
          for (int i = 0; i < dimfull; ++i)
            ip += std::conj(basis.at(i, j)) * col[i];
          for (int i = 0; i < dimfull; ++i) col[i] -= ip * basis.at(i, j);
        }
      }
      double nn = 0;
      for (const cd& z : col) nn += std::norm(z);
      if (nn < 1e-4) continue;
      const double inv = 1.0 / std::sqrt(nn);
      for (int i = 0; i < dimfull; ++i) basis.at(i, next) = col[i] * inv;
      ++next;
    }
    return next;
  };
  if (got < k) {
    int gu = complete(r.u, m, got);
    int gv = complete(r.v, n, got);
    if (gu != k || gv != k) fail("NumericalFailure", "svd basis completion");
  }
  return r;
}

double op_norm(const CMatrix& a) {
  if (a.empty()) return 0.0;
  CMatrix g = a.adjoint() * a;
  SpectralDecomposition e = eig_hermitian(g);
  const double lam = e.eigenvalues.back();
  return lam > 0 ? std::sqrt(lam) : 0.0;
}

CMatrix functional_calculus(const CMatrix& a, const ScalarFn& fn,
                            double sa_tol) {
  const double sd = op_norm(a - a.adjoint());
  if (sd > sa_tol)
    fail("NotSelfAdjoint",
         "functional calculus input, defect " + std::to_string(sd));
  SpectralDecomposition e = eig_hermitian(a);
  for (const auto& cut : fn.cuts)
    for (double lam : e.eigenvalues)
      if (std::abs(lam - cut.point) < cut.gap)
        fail("CutViolation", "eigenvalue " + std::to_string(lam) +
                                 " within gap of cut " +
                                 std::to_string(cut.point));
  CMatrix d(a.rows(), a.rows());
  for (int i = 0; i < a.rows(); ++i) d.at(i, i) = cd(fn.f(e.eigenvalues[i]), 0.0);
  CMatrix r = e.vectors * d * e.vectors.adjoint();
  return (r + r.adjoint()) * cd(0.5, 0.0);
}

CMatrix range_frame(const CMatrix& p, int rank) {
  SpectralDecomposition e = eig_hermitian(p);
  std::vector<int> cols;
  for (int j = 0; j < p.rows(); ++j)
    if (e.eigenvalues[j] > 0.5) cols.push_back(j);
  if (rank >= 0 && int(cols.size()) != rank)
    fail("RankMismatch", "range_frame expected rank " + std::to_string(rank) +
                             ", got " + std::to_string(cols.size()));
  CMatrix f(p.rows(), int(cols.size()));
  for (int j = 0; j < int(cols.size()); ++j)
    for (int i = 0; i < p.rows(); ++i) f.at(i, j) = e.vectors.at(i, cols[j]);
  return f;
}

} // namespace afb
