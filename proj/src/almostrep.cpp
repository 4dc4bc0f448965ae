#include "afb/almostrep.hpp"

#include "afb/eig.hpp"

namespace afb {

CMatrix evaluate(const AlmostRepresentation& rep, const Word& w) {
  CMatrix acc = CMatrix::identity(rep.fiber.dim());
  for (int letter : w) {
    const int g = std::abs(letter) - 1;
    if (g < 0 || g >= int(rep.images.size()))
      fail("InputError", "word letter out of range");
    const CMatrix& u = rep.images[g];
    acc = (letter > 0 ? u : u.adjoint()) * acc;
  }
  return acc;
}

AlmostRepresentation associated_rep(const AlmostFlatBundle& b,
                                    const Presentation& pres, double tol) {
  AlmostRepresentation rep;
  rep.fiber = b.fiber;
  const Grading g = Grading::of(b.fiber);
  for (int e : pres.edge_of_gen) {
    const CMatrix& t = b.transition[e];
    if (unitary_defect(t) > tol)
      fail("UnitaryDefect", "associated representation");
    if (even_defect(t, g) > tol)
      fail("ParityDefect", "associated representation");
    rep.images.push_back(t);
  }
  return rep;
}

RelationReport relation_defect(const AlmostRepresentation& rep,
                               const Presentation& pres) {
  RelationReport out;
  const CMatrix id = CMatrix::identity(rep.fiber.dim());
  for (const Word& r : pres.relators) {
    const double d = op_norm(evaluate(rep, r) - id);
    out.per_relator.push_back(d);
    out.max_defect = std::max(out.max_defect, d);
  }
  return out;
}

double equivalence_distance(const AlmostRepresentation& rep1,
                            const CMatrix& s1,
                            const AlmostRepresentation& rep2,
                            const CMatrix& s2,
                            const std::vector<Word>& elements) {
  double worst = 0.0;
  for (const Word& w : elements) {
    const CMatrix a = s1 * evaluate(rep1, w) * s1.adjoint();
    const CMatrix b = s2 * evaluate(rep2, w) * s2.adjoint();
    worst = std::max(worst, op_norm(a - b));
  }
  return worst;
}

FredholmCheckReport fredholm_rep_check(const FredholmRepresentation& fr,
                                       double tol) {
  FredholmCheckReport rep;
  rep.tau = fr.ideal.tau;
  const Grading g = Grading::of(fr.rep.fiber);
  const CMatrix k = corner_projector(fr.rep.fiber, fr.ideal);
  const CMatrix id = CMatrix::identity(fr.rep.fiber.dim());
  rep.odd_defect = odd_defect(fr.f, g);
  rep.sa_defect = self_adjoint_defect(fr.f);
  rep.square_corner = corner_distance(fr.f * fr.f - id, k);
  for (const CMatrix& u : fr.rep.images) {
    const CMatrix dev = u * fr.f * u.adjoint() - fr.f;
    rep.edge_corner = std::max(rep.edge_corner, corner_distance(dev, k));
  }
  rep.pass = rep.odd_defect <= tol && rep.sa_defect <= tol &&
             rep.square_corner <= rep.tau && rep.edge_corner <= rep.tau;
  return rep;
}

} // namespace afb
