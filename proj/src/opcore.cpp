#include "afb/opcore.hpp"

#include <algorithm>
#include <cmath>

namespace afb {

CMatrix corner_projector(const GradedSpace& w, const CornerIdeal& ideal) {
  const int c0 = ideal.c0 < 0 ? w.d0 : ideal.c0;
  const int c1 = ideal.c1 < 0 ? w.d1 : ideal.c1;
  if (c0 > w.d0 || c1 > w.d1) fail("BadCorner", "corner ranks exceed fiber");
  CMatrix k(w.dim(), w.dim());
  for (int i = 0; i < c0 * w.m; ++i) k.at(i, i) = cd(1, 0);
  for (int i = 0; i < c1 * w.m; ++i)
    k.at(w.dim0() + i, w.dim0() + i) = cd(1, 0);
  return k;
}

CMatrix corner_projector_copies(const GradedSpace& w, const CornerIdeal& ideal,
                                int copies) {
  CMatrix k1 = corner_projector(w, ideal);
  CMatrix k(0, 0);
  for (int i = 0; i < copies; ++i) k = CMatrix::direct_sum(k, k1);
  return k;
}

double corner_distance(const CMatrix& a, const CMatrix& k) {
  return op_norm(a - k * a * k);
}

ScalarFn clamp_fn() {
  ScalarFn fn;
  fn.f = [](double x) { return std::clamp(x, -1.0, 1.0); };
  return fn;
}

ScalarFn step_fn(double point, double gap) {
  ScalarFn fn;
  fn.f = [point](double x) { return x < point ? 0.0 : 1.0; };
  fn.cuts.push_back({point, gap});
  return fn;
}

CMatrix clamp_C(const CMatrix& f, const GradedSpace& w, double tol) {
  Grading g = Grading::of(w);
  if (f.rows() != w.dim() || f.cols() != w.dim())
    fail("ShapeMismatch", "clamp_C fiber");
  if (odd_defect(f, g) > tol) fail("NotOdd", "clamp_C input not odd");
  CMatrix sym = (f + f.adjoint()) * cd(0.5, 0.0);
  CMatrix c = functional_calculus(sym, clamp_fn(), std::max(tol, 1e-12));
  // Odd part is preserved by odd functions only; the clamp is odd as a
  // function, and C inherits oddness because sym is odd: enforce exactly.
  CMatrix gamma = g.involution();
  return (c - gamma * c * gamma) * cd(0.5, 0.0);
}

CMatrix Dressing::dress(const CMatrix& x) const {
  CMatrix inner(udim(), udim());
  inner.set_block(0, 0, x);
  return u * inner * u.adjoint();
}

Dressing make_dressing(const CMatrix& f, const GradedSpace& w, double tol) {
  Dressing d;
  d.w = w;
  d.g_w = Grading::of(w);
  d.g_q = Grading::concat(d.g_w, d.g_w.opposite());
  d.g_u = Grading::concat(d.g_q, d.g_q.opposite());
  d.c = clamp_C(f, w, tol);

  CMatrix c2 = d.c * d.c;
  d.s = functional_calculus(c2, ScalarFn{[](double x) {
                              return std::sqrt(std::max(0.0, 1.0 - x));
                            },
                                          {}});

  const int n = w.dim();
  d.q = CMatrix(2 * n, 2 * n);
  d.q.set_block(0, 0, d.c);
  d.q.set_block(0, n, d.s);
  d.q.set_block(n, 0, d.s);
  d.q.set_block(n, n, -d.c);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CMatrix id2 = CMatrix::identity(2 * n);
  d.u = CMatrix(4 * n, 4 * n);
  d.u.set_block(0, 0, id2 * cd(inv_sqrt2, 0));
  d.u.set_block(0, 2 * n, d.q * cd(inv_sqrt2, 0));
  d.u.set_block(2 * n, 0, d.q * cd(inv_sqrt2, 0));
  d.u.set_block(2 * n, 2 * n, id2 * cd(-inv_sqrt2, 0));

  d.t = CMatrix(4 * n, 4 * n);
  d.t.set_block(0, 2 * n, id2);
  d.t.set_block(2 * n, 0, id2);
  return d;
}

CMatrix pad_embed(const CMatrix& a, const GradedSpace& src,
                  const GradedSpace& tgt, Fill fill) {
  if (a.rows() != src.dim() || a.cols() != src.dim())
    fail("ShapeMismatch", "pad_embed source");
  if (tgt.d0 < src.d0 || tgt.d1 < src.d1 || tgt.m != src.m)
    fail("ShapeMismatch", "pad_embed target too small or wrong B");
  const int s0 = src.dim0(), s1 = src.dim1();
  const int t0 = tgt.dim0(), t1 = tgt.dim1();
  CMatrix r(tgt.dim(), tgt.dim());
  r.set_block(0, 0, a.block(0, 0, s0, s0));
  r.set_block(0, t0, a.block(0, s0, s0, s1));
  r.set_block(t0, 0, a.block(s0, 0, s1, s0));
  r.set_block(t0, t0, a.block(s0, s0, s1, s1));
  if (fill == Fill::IdentityEven) {
    for (int i = s0; i < t0; ++i) r.at(i, i) = cd(1, 0);
    for (int i = s1; i < t1; ++i) r.at(t0 + i, t0 + i) = cd(1, 0);
  } else if (fill == Fill::IdentityOdd) {
    if (t0 - s0 != t1 - s1)
      fail("ShapeMismatch", "odd identity fill needs equal complements");
    for (int i = 0; i < t0 - s0; ++i) {
      r.at(s0 + i, t0 + s1 + i) = cd(1, 0);
      r.at(t0 + s1 + i, s0 + i) = cd(1, 0);
    }
  }
  return r;
}

std::pair<double, double> ufT_conjugate(const CMatrix& f, const CMatrix& h,
                                        const GradedSpace& w,
                                        const CornerIdeal& ideal, double tol) {
  Dressing d = make_dressing(f, w, tol);
  const int n = w.dim();
  // (F (+) -F) (+) (-F (+) F)
  CMatrix main(4 * n, 4 * n);
  main.set_block(0, 0, f);
  main.set_block(n, n, -f);
  main.set_block(2 * n, 2 * n, -f);
  main.set_block(3 * n, 3 * n, f);
  CMatrix dev = d.u.adjoint() * d.t * d.u - main;
  CMatrix hbig(4 * n, 4 * n);
  hbig.set_block(0, 0, h);
  CMatrix k = corner_projector_copies(w, ideal, 4);
  return {corner_distance(hbig * dev, k), corner_distance(dev * hbig, k)};
}

} // namespace afb
