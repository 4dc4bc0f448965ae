#pragma once

// Operator-level constructions on a graded fiber W:
//   - corner ideals standing in for the compacts, with corner_distance
//   - the clamp C(F), the odd symmetry Q(F) on W (+) W^op, and the even
//     rotation U(F) on (W (+) W^op) (+) (W (+) W^op)^op
//   - padding embeddings with zero or identity fill
//   - the conjugation identity U(F)* T U(F) against (F (+) -F) (+) (-F (+) F)
//
// Layout convention for the doubled spaces: direct summands are stacked in
// order [W, W^op, W^op', W'], stored as plain blocks; gradings are tracked
// separately as sign vectors since the opposite space flips parity without
// permuting coordinates.

#include <utility>

#include "afb/cmatrix.hpp"
#include "afb/eig.hpp"

namespace afb {

// Compacts are modelled as a corner: the ideal K A K with K the projector
// onto the leading c0 even and c1 odd B-summands.
struct CornerIdeal {
  int c0 = -1;  // -1 means full corner (everything compact)
  int c1 = -1;
  double tau = 1e-8;
};

CMatrix corner_projector(const GradedSpace& w, const CornerIdeal& ideal);
// Corner projector on a direct sum of `copies` spaces that are all W as a
// set (grading flips do not move coordinates, so the projector repeats).
CMatrix corner_projector_copies(const GradedSpace& w, const CornerIdeal& ideal,
                                int copies);
double corner_distance(const CMatrix& a, const CMatrix& k);

ScalarFn clamp_fn();
ScalarFn step_fn(double point, double gap);

// C(F) = clamp((F + F*)/2); F must be odd self-adjoint within tol.
CMatrix clamp_C(const CMatrix& f, const GradedSpace& w, double tol = 1e-9);

// All derived dressing data for one Fredholm operator F on W.
struct Dressing {
  GradedSpace w;
  CMatrix c;        // C(F), odd self-adjoint contraction on W
  CMatrix s;        // sqrt(1 - C^2)
  CMatrix q;        // on W (+) W^op, odd self-adjoint unitary
  CMatrix u;        // on the 4-fold space, even self-adjoint unitary
  CMatrix t;        // swap symmetry on the 4-fold space, odd s.a. unitary
  Grading g_w, g_q, g_u;

  int qdim() const { return 2 * w.dim(); }
  int udim() const { return 4 * w.dim(); }

  // The *-homomorphism X -> U ((X (+) 0) (+) 0) U* from ops on W to ops on
  // the 4-fold space; even X maps to even images.
  CMatrix dress(const CMatrix& x) const;
};

Dressing make_dressing(const CMatrix& f, const GradedSpace& w,
                       double tol = 1e-9);

enum class Fill { Zero, IdentityEven, IdentityOdd };

// Graded block embedding of A (operator on src) into an operator on tgt;
// the complement is filled with 0, the even identity, or the odd swap
// identity (which needs equal even/odd complements).
CMatrix pad_embed(const CMatrix& a, const GradedSpace& src,
                  const GradedSpace& tgt, Fill fill);

// Corner distances of H'(U*TU - (F(+)-F)(+)(-F(+)F)) and its reverse, where
// H' = (H (+) 0) (+) 0. Both are small when H almost commutes with F and F
// is almost a symmetry, and vanish when F is an exact odd s.a. unitary.
std::pair<double, double> ufT_conjugate(const CMatrix& f, const CMatrix& h,
                                        const GradedSpace& w,
                                        const CornerIdeal& ideal,
                                        double tol = 1e-9);

} // namespace afb
