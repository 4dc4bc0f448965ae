#pragma once

// Almost representations of a finitely presented group on a graded fiber:
// one even unitary per generator, with the relation defect measured in
// operator norm. The representation associated to a bundle sends each
// non-tree generator to its transition and each tree generator to the
// identity.

#include "afb/bundle.hpp"

namespace afb {

struct AlmostRepresentation {
  GradedSpace fiber;
  std::vector<CMatrix> images;  // per generator, even unitary
};

// Word evaluation: letters act in path order, so each successive letter
// multiplies on the left. evaluate({a, b}) = img(b) * img(a).
CMatrix evaluate(const AlmostRepresentation& rep, const Word& w);

AlmostRepresentation associated_rep(const AlmostFlatBundle& b,
                                    const Presentation& pres,
                                    double tol = 1e-9);

struct RelationReport {
  double max_defect = 0.0;
  std::vector<double> per_relator;
};

RelationReport relation_defect(const AlmostRepresentation& rep,
                               const Presentation& pres);

// max over the sample words of || s1 rho1(w) s1* - s2 rho2(w) s2* ||
double equivalence_distance(const AlmostRepresentation& rep1,
                            const CMatrix& s1,
                            const AlmostRepresentation& rep2,
                            const CMatrix& s2,
                            const std::vector<Word>& elements);

// A representation together with one odd self-adjoint operator F that is a
// symmetry modulo the corner and almost commutes with every generator image.
struct FredholmRepresentation {
  AlmostRepresentation rep;
  CMatrix f;
  CornerIdeal ideal;
};

FredholmCheckReport fredholm_rep_check(const FredholmRepresentation& fr,
                                       double tol = 1e-9);

} // namespace afb
