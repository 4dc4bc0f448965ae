#pragma once

// Almost-flat bundles over a simplicial complex: one even unitary per
// oriented edge (the reverse orientation is the adjoint), flatness measured
// as the worst triangle holonomy, and Fredholm data as one odd self-adjoint
// operator per vertex compatible with the transitions modulo a corner.

#include "afb/cmatrix.hpp"
#include "afb/opcore.hpp"
#include "afb/rng.hpp"
#include "afb/simplicial.hpp"

namespace afb {

struct AlmostFlatBundle {
  SimplicialComplex complex;
  GradedSpace fiber;
  std::vector<CMatrix> transition;  // per edge, oriented low -> high vertex

  // transport from fiber over v to fiber over w
  CMatrix t(int v, int w) const;
};

struct FlatnessReport {
  double epsilon = 0.0;          // max triangle holonomy defect
  double delta3 = 0.0;           // max cocycle defect over ordered triples
  double unitary_defect = 0.0;   // worst transition unitarity defect
  double parity_defect = 0.0;    // worst transition evenness defect
  int worst_triangle = -1;
  std::vector<double> per_triangle;
};

// Validates transitions (unitary and even within unitary_tol) and measures
// epsilon and delta3. For unitary transitions the two agree per triangle;
// epsilon <= 2 delta3 always.
FlatnessReport flatness_defect(const AlmostFlatBundle& b,
                               double unitary_tol = 1e-9);

CMatrix transport(const AlmostFlatBundle& b, const SimplicialPath& path);

struct LoopBoundReport {
  double measured = 0.0;
  double epsilon = 0.0;
  int steps = 0;
  double bound = 0.0;  // steps * epsilon
};

// Certificate-driven bound ||T_loop - id|| <= N * epsilon; the certificate
// is verified first. The tree-holonomy correction is zero because tree
// edges are the identity generator (word evaluation equals the re-gauged
// transport, which agrees with the raw transport on based loops).
LoopBoundReport transport_loop_bound(const AlmostFlatBundle& b,
                                     const Presentation& pres,
                                     const SimplicialPath& loop,
                                     const FillingCertificate& cert);

struct RandomBundleOptions {
  double epsilon_target = 0.0;
  // draw the odd-block representation equal to the even block (needs d0==d1)
  bool symmetric_blocks = false;
  // optional finer block structure of the even (and mirrored odd) part, in
  // B-summand units; images are drawn block-diagonally per sub-block
  std::vector<int> even_subblocks;
};

// Exact unitary cocycle from a random representation (free on the non-tree
// generators when the complex has no 2-simplices, otherwise factored through
// H1 so that every relator maps to the identity), then each non-tree
// transition is moved along a unitary geodesic by epsilon_target / 3.
AlmostFlatBundle random_bundle(const SimplicialComplex& k,
                               const GradedSpace& fiber, uint64_t seed,
                               const RandomBundleOptions& opts = {});

struct FredholmDatum {
  std::vector<CMatrix> f_at;  // per vertex, odd self-adjoint
  CornerIdeal ideal;
};

struct FredholmCheckReport {
  double odd_defect = 0.0;
  double sa_defect = 0.0;
  double square_corner = 0.0;   // max corner_distance(F_v^2 - 1)
  double edge_corner = 0.0;     // max corner_distance(T F_v T* - F_w)
  bool pass = false;
  double tau = 0.0;
};

FredholmCheckReport fredholm_check(const AlmostFlatBundle& b,
                                   const FredholmDatum& datum,
                                   double tol = 1e-9);

// Coefficient change along the r-fold diagonal embedding M_m -> M_{m'},
// r*m <= m'; transitions go through the unitalized map f(a) + (1 - f(1)),
// which preserves unitarity, evenness, and the flatness defect exactly.
struct BlockEmbedding {
  int r = 1;
  int m_to = 0;
};

AlmostFlatBundle pushforward_bundle(const AlmostFlatBundle& b,
                                    const BlockEmbedding& f);
FredholmDatum pushforward_datum(const FredholmDatum& datum,
                                const GradedSpace& fiber,
                                const BlockEmbedding& f);
// entrywise a -> diag(a, ..., a, 0) on one operator
CMatrix pushforward_operator(const CMatrix& a, const GradedSpace& fiber,
                             const BlockEmbedding& f, bool unitalize);

} // namespace afb
