#pragma once

// Index-level constructions: the Mishchenko projection over a presentation,
// Fredholm-dressed transitions and the projection p_tilde they assemble,
// pushforwards of group-algebra projections through almost representations,
// the two index computations (projection splitting and kernel/cokernel
// families), the desk-scale K0 invariant (normalized rank plus one Chern
// number per registered 2-cycle), and the pairing checks built from them.

#include <map>
#include <string>

#include "afb/almostrep.hpp"

namespace afb {

// Finitely supported element of M_k of the group algebra. Support keys are
// reduced words over the presentation's generators; callers canonicalize.
struct GroupAlgebraElement {
  int k = 1;
  std::map<Word, CMatrix> support;  // reduced word -> k x k coefficient

  double l1_norm() const;
  GroupAlgebraElement adjoint() const;
  static GroupAlgebraElement unit(int k);
};

// rho_hat(a) = sum over support of coeff (x) evaluate(rep, word); linear,
// with ||rho_hat(a)|| <= l1_norm(a).
CMatrix rho_hat(const AlmostRepresentation& rep, const GroupAlgebraElement& a);

struct RhoSharpResult {
  CMatrix projection;
  double gate = 0.0;        // measured || ptilde^2 - ptilde ||, must be < 1/4
  double idempotency = 0.0; // residual of the flattened output
};

// Spectral pushforward: symmetrize rho_hat(p), require the 1/4 gate, then
// flatten by the step function at 1/2 (with the configured spectral gap).
RhoSharpResult rho_sharp(const AlmostRepresentation& rep,
                         const GroupAlgebraElement& p,
                         const ScalarFn::Cut& cut = {0.5, 0.1});

// corner_distance([rho_sharp(p), F (+) ... (+) F]) over k copies of W.
double rho_sharp_commutator(const FredholmRepresentation& fr,
                            const GroupAlgebraElement& p,
                            const ScalarFn::Cut& cut = {0.5, 0.1});

// Families over the complex -------------------------------------------------

struct ProjectionFamily {
  SimplicialComplex complex;
  std::vector<Point> samples;
  std::function<CMatrix(const Point&)> value;
  double tolerance = 0.0;  // measured max || P^2 - P || over samples
  double sa_defect = 0.0;
};

// Evaluates the family at its samples and records tolerance / sa defect.
void measure_family(ProjectionFamily& fam);

struct OperatorFamily {
  SimplicialComplex complex;
  std::vector<Point> samples;
  std::function<CMatrix(const Point&)> value;  // odd self-adjoint values
};

// Mishchenko projection ------------------------------------------------------

// Block (j,k) = sqrt(lambda_j(x) lambda_k(x)) evaluate(rep, w(v_k -> v_j));
// exactly self-adjoint, an exact projection when the rep kills relators.
CMatrix mishchenko_projection(const SimplicialComplex& k,
                              const Presentation& pres,
                              const AlmostRepresentation& rep, const Point& x);

ProjectionFamily mishchenko_family(const SimplicialComplex& k,
                                   const Presentation& pres,
                                   const AlmostRepresentation& rep,
                                   int level = 2);

// Dressed transitions and p_tilde ---------------------------------------------

struct DressedTransitions {
  GradedSpace w;      // bundle fiber
  GradedSpace w_pad;  // padded fiber (d0 + pad, d1 + pad, m)
  CMatrix f_prime;    // padded base-vertex Fredholm operator
  Dressing dressing;  // built from f_prime
  std::vector<CMatrix> psi;  // per edge, dressed padded transition
  double commutator_corner = 0.0;  // max corner_distance([psi, T])

  // dressed transport from the fiber over v to the fiber over w
  CMatrix t(const SimplicialComplex& k, int v, int w) const;
};

// Pads every transition (zero fill) and the base-vertex F (odd identity
// fill), then conjugates the zero-padded transitions into the 4-fold space
// of the dressing; logs the worst corner distance of [psi, T].
DressedTransitions dressed_transitions(const AlmostFlatBundle& b,
                                       const FredholmDatum& datum, int pad = 0,
                                       int base_vertex = 0);

// Block (j,k) = sqrt(lambda_j lambda_k) Psi''(v_k -> v_j); exactly
// self-adjoint; an exact projection when the bundle is flat.
CMatrix p_tilde_E(const AlmostFlatBundle& b, const DressedTransitions& dt,
                  const Point& x);

// The p_tilde family together with the data index_from_projection needs.
struct IndexInput {
  DressedTransitions dt;
  ProjectionFamily family;
  CMatrix t_sym;    // n diagonal copies of the dressing swap symmetry
  Grading grading;  // n copies of the dressed grading
};

IndexInput p_tilde_route(const AlmostFlatBundle& b, const FredholmDatum& datum,
                         int pad = 0, int base_vertex = 0, int level = 2);

// K0 invariants ----------------------------------------------------------------

struct K0Class {
  int rank = 0;  // normalized: one B-summand counts 1
  std::map<std::string, int> chern;
  double rank_residual = 0.0;
  std::map<std::string, double> chern_residual;
};

// Difference class [pos] - [neg]; equality is tested at the invariant level
// (rank difference and per-cycle Chern difference).
struct K0Diff {
  K0Class pos, neg;
  int rank() const { return pos.rank - neg.rank; }
  int chern_on(const std::string& cycle) const;
};

bool invariant_equal(const K0Diff& a, const K0Diff& b);

struct ChernOptions {
  int min_level = 2;
  int max_level = 5;
  double residual_tol = 0.01;
  double min_overlap_det = 0.1;
};

struct ChernResult {
  int value = 0;
  double residual = 0.0;
  int level = 0;
};

// Lattice field strength over the named 2-cycle: sum of plaquette phases
// arg det(U_ab U_bc U_ca) of frame overlaps, refined until the total is
// within residual_tol of an integer.
ChernResult chern_number(const ProjectionFamily& fam, const std::string& cycle,
                         const ChernOptions& opts = {});

// Rank (trace / m, constant over samples) plus Chern number per registered
// cycle of the family's complex.
K0Class k0_class(const ProjectionFamily& fam, int m,
                 const ChernOptions& opts = {});

// Index computations -----------------------------------------------------------

// Splitting form: flatten the family, split P = P0 (+) P1 along the grading,
// return [P0] - [F0* P1 F0] where t_sym = offdiag(F0*, F0). The trace
// difference (tr P0 - tr P1)/m must be constant over samples.
K0Diff index_from_projection(const ProjectionFamily& fam, const CMatrix& t_sym,
                             const Grading& g, int m,
                             const ScalarFn::Cut& cut = {0.5, 0.1},
                             const ChernOptions& opts = {});

// Kernel/cokernel classes of the odd self-adjoint family by singular value
// clustering of the even-to-odd block: near-zero cluster sizes must be
// constant over samples and separated from the rest by at least `gap`.
K0Diff index_family_svd(const OperatorFamily& fam, const Grading& g, int m,
                        double gap = 0.1, const ChernOptions& opts = {});

// The undressed Fredholm family whose kernel/cokernel classes realize the
// bundle's index on the Mishchenko ambient: conjugated-datum average on the
// range of the flattened Mishchenko projection, a fixed odd symmetry on its
// complement. Needs a balanced fiber (d0 == d1).
OperatorFamily fredholm_index_family(const AlmostFlatBundle& b,
                                     const FredholmDatum& datum,
                                     const Presentation& pres, int level = 2,
                                     const ScalarFn::Cut& cut = {0.5, 0.1});

// Pairings and theorem-level checks ---------------------------------------------

struct KHomologyClass {
  enum class Kind { Point, Fundamental };
  Kind kind = Kind::Point;
  std::string cycle;  // fundamental classes name a registered 2-cycle
};

// Point class pairs to the rank difference, fundamental class to the Chern
// difference on its cycle.
int pairing(const KHomologyClass& eta, const K0Diff& cls);

struct MainTheoremReport {
  double edge_block_max = 0.0;   // max || dressed rep image - psi ||
  double edge_block_bound = 0.0; // epsilon + slack
  double projection_max = 0.0;   // max || rep image of P^M - p_tilde ||
  double projection_bound = 0.0; // n * epsilon + slack
  double epsilon = 0.0;
  bool pass = false;
};

// Compares the dressed representation images of the edge words against the
// dressed transitions, blockwise and assembled into the two projections.
MainTheoremReport main_theorem_check(const AlmostFlatBundle& b,
                                     const FredholmDatum& datum,
                                     const Presentation& pres,
                                     const std::vector<Point>& samples,
                                     int pad = 0, double slack = 1e-8);

struct DadarlatReport {
  int lhs = 0;          // pairing against the bundle index
  int rhs = 0;          // paired difference of the two triple indexes
  int rhs_p = 0, rhs_q = 0;
  double gate_p = 0.0, gate_q = 0.0;
  bool equal = false;
};

// Two-sided index equality: pairing(eta, ind of the dressed bundle index)
// against the difference of the triple indexes of rho_sharp(p), rho_sharp(q)
// dressed into the same 4-fold space.
DadarlatReport dadarlat_check(const AlmostFlatBundle& b,
                              const FredholmDatum& datum,
                              const Presentation& pres,
                              const KHomologyClass& eta,
                              const GroupAlgebraElement& p,
                              const GroupAlgebraElement& q, int pad = 0,
                              const ScalarFn::Cut& cut = {0.5, 0.1});

// Odd self-adjoint swap symmetry on a balanced graded space.
CMatrix odd_symmetry(const GradedSpace& w);

// Pushforward of a group-algebra coefficient matrix is entrywise; the index
// rank of a pushed bundle datum is r times the source rank, checked at the
// matrix-trace level by the caller.

} // namespace afb
