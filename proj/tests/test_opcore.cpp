#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "afb/eig.hpp"
#include "afb/opcore.hpp"
#include "afb/random.hpp"
#include "afb/rng.hpp"

using namespace afb;

namespace {

// Independent reference for the operator norm: power iteration on A*A in
// long double with a fixed deterministic start, no shared code with op_norm.
double ref_op_norm(const CMatrix& a) {
  const int m = a.rows(), n = a.cols();
  std::vector<std::complex<long double>> x(n), y(m), z(n);
  for (int i = 0; i < n; ++i)
    x[i] = std::complex<long double>(1.0L + i, 0.5L * ((i % 3) - 1));
  long double sigma = 0.0L;
  for (int it = 0; it < 4000; ++it) {
    for (int i = 0; i < m; ++i) {
      std::complex<long double> s = 0;
      for (int j = 0; j < n; ++j)
        s += std::complex<long double>(a.at(i, j).real(), a.at(i, j).imag()) * x[j];
      y[i] = s;
    }
    for (int j = 0; j < n; ++j) {
      std::complex<long double> s = 0;
      for (int i = 0; i < m; ++i)
        s += std::conj(std::complex<long double>(a.at(i, j).real(),
                                                 a.at(i, j).imag())) * y[i];
      z[j] = s;
    }
    long double nz = 0;
    for (const auto& v : z) nz += std::norm(v);
    nz = std::sqrt(nz);
    if (nz == 0.0L) return 0.0;
    for (int j = 0; j < n; ++j) x[j] = z[j] / nz;
    sigma = std::sqrt(nz);
  }
  return double(sigma);
}

CMatrix random_hermitian(Rng& rng, int n) {
  CMatrix a = gaussian_matrix(rng, n, n);
  return (a + a.adjoint()) * cd(0.5, 0.0);
}

CMatrix swap_symmetry(const GradedSpace& w) {
  CMatrix f(w.dim(), w.dim());
  for (int i = 0; i < w.dim0(); ++i) {
    f.at(i, w.dim0() + i) = cd(1.0, 0.0);
    f.at(w.dim0() + i, i) = cd(1.0, 0.0);
  }
  return f;
}

double eig_residual(const CMatrix& a, const SpectralDecomposition& e) {
  CMatrix lam(a.rows(), a.rows());
  for (int i = 0; i < a.rows(); ++i) lam.at(i, i) = cd(e.eigenvalues[i], 0.0);
  return op_norm(a * e.vectors - e.vectors * lam);
}

} // namespace

TEST_CASE("op_norm on hand matrices") {
  CMatrix d = CMatrix::diag({-3.0, 2.0, 0.5});
  CHECK(op_norm(d) == doctest::Approx(3.0).epsilon(1e-10));

  CMatrix nil(2, 2);
  nil.at(0, 1) = cd(2.0, 0.0);
  CHECK(op_norm(nil) == doctest::Approx(2.0).epsilon(1e-10));

  CHECK(op_norm(CMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(op_norm(CMatrix::zero(3, 4)) == doctest::Approx(0.0));
}

TEST_CASE("op_norm matches the independent power iteration") {
  Rng rng(41);
  for (int n : {2, 5, 9, 16}) {
    const CMatrix a = gaussian_matrix(rng, n, n + 1);
    CHECK(op_norm(a) == doctest::Approx(ref_op_norm(a)).epsilon(1e-8));
  }
}

TEST_CASE("eig_hermitian recovers a known spectrum") {
  Rng rng(5);
  const std::vector<double> spec = {-2.0, -0.5, 0.0, 0.0, 1.0, 1.0, 3.5};
  const int n = int(spec.size());
  const CMatrix v = haar_unitary(rng, n);
  const CMatrix a = v * CMatrix::diag(spec) * v.adjoint();
  const SpectralDecomposition e = eig_hermitian(a);
  for (int i = 0; i < n; ++i)
    CHECK(e.eigenvalues[i] == doctest::Approx(spec[i]).epsilon(1e-10));
  CHECK(eig_residual(a, e) < 1e-10);
  CHECK(op_norm(e.vectors.adjoint() * e.vectors - CMatrix::identity(n)) < 1e-10);
}

TEST_CASE("eig_hermitian handles fully complex projections") {
  // Regression: a complex rank-one projection must come out with spectrum
  // {0,...,0,1}, not mid-interval values.
  Rng rng(9);
  for (int n : {3, 8, 12}) {
    CMatrix u(n, 1);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      u.at(i, 0) = cd(rng.next_gaussian(), rng.next_gaussian());
      norm += std::norm(u.at(i, 0));
    }
    u = u * cd(1.0 / std::sqrt(norm), 0.0);
    const CMatrix p = u * u.adjoint();
    const SpectralDecomposition e = eig_hermitian(p);
    for (int i = 0; i < n - 1; ++i)
      CHECK(std::abs(e.eigenvalues[i]) < 1e-12);
    CHECK(e.eigenvalues[n - 1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig_residual(p, e) < 1e-12);
  }
}

TEST_CASE("eig_hermitian residuals on random matrices") {
  Rng rng(13);
  for (int n : {1, 2, 6, 20}) {
    const CMatrix a = random_hermitian(rng, n);
    const SpectralDecomposition e = eig_hermitian(a);
    CHECK(eig_residual(a, e) < 1e-9 * std::max(1.0, op_norm(a)));
    for (int i = 0; i + 1 < n; ++i)
      CHECK(e.eigenvalues[i] <= e.eigenvalues[i + 1] + 1e-12);
  }
}

TEST_CASE("svd reconstructs and orders") {
  Rng rng(17);
  for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 3}, {5, 2}, {2, 7}}) {
    const CMatrix a = gaussian_matrix(rng, m, n);
    const SvdResult r = svd(a);
    const int k = int(r.sigma.size());
    CHECK(k == std::min(m, n));
    CMatrix sig(k, k);
    for (int i = 0; i < k; ++i) sig.at(i, i) = cd(r.sigma[i], 0.0);
    CHECK(op_norm(a - r.u * sig * r.v.adjoint()) < 1e-10);
    CHECK(op_norm(r.u.adjoint() * r.u - CMatrix::identity(k)) < 1e-10);
    CHECK(op_norm(r.v.adjoint() * r.v - CMatrix::identity(k)) < 1e-10);
    for (int i = 0; i + 1 < k; ++i) CHECK(r.sigma[i] >= r.sigma[i + 1] - 1e-12);
    CHECK(r.sigma[0] == doctest::Approx(op_norm(a)).epsilon(1e-9));
  }
}

TEST_CASE("svd of a rank-deficient matrix") {
  CMatrix a(3, 3);
  a.at(0, 0) = cd(0.0, 2.0);  // rank one, norm 2
  const SvdResult r = svd(a);
  CHECK(r.sigma[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(r.sigma[1]) < 1e-12);
  CHECK(std::abs(r.sigma[2]) < 1e-12);
  CMatrix sig(3, 3);
  for (int i = 0; i < 3; ++i) sig.at(i, i) = cd(r.sigma[i], 0.0);
  CHECK(op_norm(a - r.u * sig * r.v.adjoint()) < 1e-12);
}

TEST_CASE("functional calculus applies the scalar function spectrally") {
  const CMatrix a = CMatrix::diag({0.1, 0.9, 0.2});
  const CMatrix s = functional_calculus(a, step_fn(0.5, 0.1));
  CHECK(op_norm(s - CMatrix::diag({0.0, 1.0, 0.0})) < 1e-12);

  ScalarFn square{[](double x) { return x * x; }, {}};
  Rng rng(23);
  const CMatrix h = random_hermitian(rng, 5);
  CHECK(op_norm(functional_calculus(h, square) - h * h) < 1e-9);
}

TEST_CASE("functional calculus rejects bad inputs") {
  CMatrix notsa(2, 2);
  notsa.at(0, 1) = cd(1.0, 0.0);
  CHECK_THROWS_AS(functional_calculus(notsa, clamp_fn()), AfbError);

  const CMatrix near_cut = CMatrix::diag({0.45, 1.0});
  CHECK_THROWS_AS(functional_calculus(near_cut, step_fn(0.5, 0.1)), AfbError);
  // outside the gap is fine
  const CMatrix off_cut = CMatrix::diag({0.39, 1.0});
  CHECK(op_norm(functional_calculus(off_cut, step_fn(0.5, 0.1)) -
                CMatrix::diag({0.0, 1.0})) < 1e-12);
}

TEST_CASE("clamp saturates the spectrum") {
  const CMatrix a = CMatrix::diag({-3.0, -0.5, 0.7, 2.0});
  CHECK(op_norm(functional_calculus(a, clamp_fn()) -
                CMatrix::diag({-1.0, -0.5, 0.7, 1.0})) < 1e-12);
}

TEST_CASE("range_frame spans the top eigenspace") {
  Rng rng(29);
  const CMatrix v = haar_unitary(rng, 4);
  const CMatrix p = v * CMatrix::diag({1.0, 1.0, 0.0, 0.0}) * v.adjoint();
  const CMatrix f = range_frame(p, 2);
  CHECK(f.cols() == 2);
  CHECK(op_norm(f.adjoint() * f - CMatrix::identity(2)) < 1e-10);
  CHECK(op_norm(p * f - f) < 1e-10);
  CHECK_THROWS_AS(range_frame(p, 3), AfbError);
}

TEST_CASE("corner projector and distance") {
  const GradedSpace w{2, 2, 2};
  const CornerIdeal full;
  const CMatrix kfull = corner_projector(w, full);
  CHECK(op_norm(kfull - CMatrix::identity(w.dim())) < 1e-14);

  Rng rng(31);
  const CMatrix a = gaussian_matrix(rng, w.dim(), w.dim());
  CHECK(corner_distance(a, kfull) < 1e-12);

  CornerIdeal half{1, 1, 1e-8};
  const CMatrix kh = corner_projector(w, half);
  CHECK(std::abs(kh.trace().real() - 2.0 * half.c0 * w.m) < 1e-12);
  CHECK(op_norm(kh * kh - kh) < 1e-14);
  // something supported outside the corner keeps its norm as distance
  CMatrix outside(w.dim(), w.dim());
  outside.at(w.dim() - 1, w.dim() - 1) = cd(3.0, 0.0);
  CHECK(corner_distance(outside, kh) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("dressing of the exact odd symmetry is degenerate") {
  const GradedSpace w{1, 1, 2};
  const CMatrix f = swap_symmetry(w);
  const Dressing d = make_dressing(f, w);
  CHECK(op_norm(d.c - f) < 1e-12);
  // S = sqrt(1 - C^2) at spectrum edge: noise enters under the square root
  CHECK(op_norm(d.s) < 1e-7);
}

TEST_CASE("dressing invariants for a generic Fredholm operator") {
  const GradedSpace w{2, 2, 1};
  Rng rng(37);
  // odd self-adjoint contraction-ish F with an interesting spectrum
  CMatrix b = gaussian_matrix(rng, w.dim1(), w.dim0());
  b = b * cd(0.4, 0.0);
  CMatrix f(w.dim(), w.dim());
  f.set_block(w.dim0(), 0, b);
  f.set_block(0, w.dim0(), b.adjoint());

  const Dressing d = make_dressing(f, w);
  const CMatrix gq = d.g_q.involution();
  const CMatrix gu = d.g_u.involution();

  CHECK(op_norm(d.q * d.q - CMatrix::identity(d.qdim())) < 1e-9);
  CHECK(op_norm(d.q - d.q.adjoint()) < 1e-10);
  CHECK(op_norm(gq * d.q * gq + d.q) < 1e-10);  // odd

  CHECK(op_norm(d.u * d.u - CMatrix::identity(d.udim())) < 1e-9);
  CHECK(op_norm(d.u - d.u.adjoint()) < 1e-10);
  CHECK(op_norm(gu * d.u * gu - d.u) < 1e-10);  // even

  CHECK(op_norm(d.t * d.t - CMatrix::identity(d.udim())) < 1e-12);
  CHECK(op_norm(d.t - d.t.adjoint()) < 1e-12);
  CHECK(op_norm(gu * d.t * gu + d.t) < 1e-10);  // odd

  // dress is a unital-to-projection *-homomorphism on even operators
  const CMatrix x = haar_even_unitary(rng, w);
  const CMatrix y = haar_even_unitary(rng, w);
  CHECK(op_norm(d.dress(x) * d.dress(y) - d.dress(x * y)) < 1e-10);
  CHECK(op_norm(d.dress(x).adjoint() - d.dress(x.adjoint())) < 1e-10);
  const CMatrix unit = d.dress(CMatrix::identity(w.dim()));
  CHECK(op_norm(unit * unit - unit) < 1e-10);
  CHECK(op_norm(unit - unit.adjoint()) < 1e-10);
  CHECK(op_norm(gu * d.dress(x) * gu - d.dress(x)) < 1e-10);  // stays even
}

TEST_CASE("ufT conjugation identity vanishes for an exact symmetry") {
  const GradedSpace w{1, 1, 3};
  const CMatrix f = swap_symmetry(w);
  const auto [fwd, rev] =
      ufT_conjugate(f, CMatrix::identity(w.dim()), w, CornerIdeal{});
  CHECK(fwd < 1e-10);
  CHECK(rev < 1e-10);
}

TEST_CASE("pad_embed fills the complement as requested") {
  const GradedSpace src{1, 1, 1};
  const GradedSpace tgt{2, 2, 1};
  Rng rng(43);
  const CMatrix a = haar_even_unitary(rng, src);

  const CMatrix z = pad_embed(a, src, tgt, Fill::Zero);
  CHECK(z.rows() == tgt.dim());
  CHECK(std::abs(z.trace() - a.trace()) < 1e-12);
  CHECK(op_norm(z * z.adjoint() - pad_embed(CMatrix::identity(src.dim()), src,
                                            tgt, Fill::Zero)) < 1e-10);

  const CMatrix e = pad_embed(a, src, tgt, Fill::IdentityEven);
  CHECK(op_norm(e * e.adjoint() - CMatrix::identity(tgt.dim())) < 1e-10);

  const CMatrix o = pad_embed(swap_symmetry(src), src, tgt, Fill::IdentityOdd);
  CHECK(op_norm(o * o - CMatrix::identity(tgt.dim())) < 1e-10);
  CHECK(op_norm(o - o.adjoint()) < 1e-12);
  const CMatrix gt = Grading::of(tgt).involution();
  CHECK(op_norm(gt * o * gt + o) < 1e-10);
}

TEST_CASE("even unitary step lands at the requested distance") {
  Rng rng(47);
  const GradedSpace w{2, 1, 2};
  for (double dist : {0.01, 0.3, 1.0, 1.9}) {
    const CMatrix u = even_unitary_step(rng, w, dist);
    CHECK(op_norm(u * u.adjoint() - CMatrix::identity(w.dim())) < 1e-10);
    CHECK(op_norm(u - CMatrix::identity(w.dim())) ==
          doctest::Approx(dist).epsilon(1e-8));
    CHECK(even_defect(u, Grading::of(w)) < 1e-12);
  }
}

TEST_CASE("grading helpers split and rebuild indices") {
  const GradedSpace w{2, 1, 2};
  const Grading g = Grading::of(w);
  CHECK(g.dim() == 6);
  CHECK(int(g.even_indices().size()) == 4);
  CHECK(int(g.odd_indices().size()) == 2);
  const Grading gg = Grading::repeat(g, 3);
  CHECK(gg.dim() == 18);
  const CMatrix inv = g.involution();
  CHECK(op_norm(inv * inv - CMatrix::identity(6)) < 1e-15);

  CMatrix odd_part(6, 6);
  odd_part.at(0, 4) = cd(1.0, 0.0);
  CHECK(odd_defect(odd_part, g) < 1e-15);
  CHECK(even_defect(odd_part, g) == doctest::Approx(1.0));
}
