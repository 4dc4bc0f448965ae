#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "afb/eig.hpp"
#include "afb/indexengine.hpp"
#include "afb/random.hpp"
#include "afb/scenario.hpp"

using namespace afb;

namespace {

std::array<double, 3> bott_n(double a, double b) {
  const double tau = 6.283185307179586;
  double h1 = std::sin(tau * a);
  double h2 = std::sin(tau * b);
  double h3 = std::cos(tau * a) + std::cos(tau * b) - 1.0;
  const double r = std::sqrt(h1 * h1 + h2 * h2 + h3 * h3);
  return {h1 / r, h2 / r, h3 / r};
}

// Quadrature for the mapping degree (1/4pi) int n . (d1 n x d2 n); the
// chart-oriented flux of the rank-one band equals this degree, so it pins
// the lattice totals below up to the cycle orientations.
double bott_degree_quadrature(int grid) {
  const double h = 1e-6;
  double total = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double a = (i + 0.5) / grid, b = (j + 0.5) / grid;
      const auto n = bott_n(a, b);
      const auto n1p = bott_n(a + h, b), n1m = bott_n(a - h, b);
      const auto n2p = bott_n(a, b + h), n2m = bott_n(a, b - h);
      std::array<double, 3> d1, d2;
      for (int c = 0; c < 3; ++c) {
        d1[c] = (n1p[c] - n1m[c]) / (2.0 * h);
        d2[c] = (n2p[c] - n2m[c]) / (2.0 * h);
      }
      const std::array<double, 3> cr = {d1[1] * d2[2] - d1[2] * d2[1],
                                        d1[2] * d2[0] - d1[0] * d2[2],
                                        d1[0] * d2[1] - d1[1] * d2[0]};
      total += n[0] * cr[0] + n[1] * cr[1] + n[2] * cr[2];
    }
  }
  return total / (4.0 * 3.14159265358979323846 * grid * grid);
}

ProjectionFamily direct_sum_family(const ProjectionFamily& a,
                                   const ProjectionFamily& b,
                                   const CMatrix& mix) {
  ProjectionFamily out;
  out.complex = a.complex;
  out.samples = a.samples;
  const auto va = a.value;
  const auto vb = b.value;
  const CMatrix u = mix;
  out.value = [va, vb, u](const Point& x) {
    return u * CMatrix::direct_sum(va(x), vb(x)) * u.adjoint();
  };
  measure_family(out);
  return out;
}

FredholmDatum symmetry_datum(const SimplicialComplex& k, const GradedSpace& w) {
  FredholmDatum d;
  d.f_at.assign(k.n, odd_symmetry(w));
  return d;
}

} // namespace

TEST_CASE("odd symmetry is an odd self-adjoint unitary") {
  const GradedSpace w{2, 2, 3};
  const CMatrix f = odd_symmetry(w);
  CHECK(op_norm(f * f - CMatrix::identity(w.dim())) < 1e-14);
  CHECK(op_norm(f - f.adjoint()) < 1e-14);
  const CMatrix g = Grading::of(w).involution();
  CHECK(op_norm(g * f * g + f) < 1e-14);
}

TEST_CASE("lattice chern numbers match the continuum quadrature") {
  const double q = bott_degree_quadrature(200);
  CHECK(std::abs(q - std::llround(q)) < 1e-3);
  const int deg = int(std::llround(q));
  CHECK(deg == 1);

  const SimplicialComplex k = corpus_complex("torus");
  const ProjectionFamily bott = bott_family(k, 2);
  CHECK(bott.tolerance < 1e-9);
  CHECK(bott.sa_defect < 1e-9);
  // the fundamental cycle is oriented by the integer lift, which reverses
  // the chart orientation, so its lattice total is minus the chart degree
  const ChernResult fwd = chern_number(bott, "fundamental");
  CHECK(fwd.value == -deg);
  CHECK(fwd.residual < 0.01);
  const ChernResult rev = chern_number(bott, "fundamental-rev");
  CHECK(rev.value == deg);
  CHECK(rev.residual < 0.01);
}

TEST_CASE("constant families have zero chern number") {
  const SimplicialComplex k = corpus_complex("torus");
  for (int rank : {1, 2}) {
    CMatrix p(2, 2);
    for (int i = 0; i < rank; ++i) p.at(i, i) = cd(1.0, 0.0);
    const ProjectionFamily fam = constant_family(k, p, 1);
    const ChernResult r = chern_number(fam, "fundamental");
    CAPTURE(rank);
    CHECK(r.value == 0);
    CHECK(r.residual < 0.01);
  }
}

TEST_CASE("chern numbers add over direct sums") {
  const SimplicialComplex k = corpus_complex("torus");
  const ProjectionFamily bott = bott_family(k, 1);
  CMatrix one(1, 1);
  one.at(0, 0) = cd(1.0, 0.0);
  const ProjectionFamily flat = constant_family(k, one, 1);
  Rng rng(51);
  for (int trial = 0; trial < 3; ++trial) {
    const CMatrix u3 = haar_unitary(rng, 3);
    const ProjectionFamily s1 = direct_sum_family(bott, flat, u3);
    CHECK(s1.tolerance < 1e-9);
    CHECK(chern_number(s1, "fundamental").value == -1);

    const CMatrix u4 = haar_unitary(rng, 4);
    const ProjectionFamily s2 = direct_sum_family(bott, bott, u4);
    CHECK(chern_number(s2, "fundamental").value == -2);
  }
}

TEST_CASE("k0 classes carry normalized rank and reject rank jumps") {
  const SimplicialComplex k = corpus_complex("torus");
  CMatrix p(2, 2);
  p.at(0, 0) = cd(1.0, 0.0);
  const ProjectionFamily fam = constant_family(k, p, 1);
  const K0Class cls = k0_class(fam, 1);
  CHECK(cls.rank == 1);
  CHECK(cls.chern.at("fundamental") == 0);
  CHECK(cls.chern.at("fundamental-rev") == 0);

  ProjectionFamily jumpy = fam;
  jumpy.value = [](const Point& x) {
    CMatrix q(2, 2);
    q.at(0, 0) = cd(1.0, 0.0);
    if (x.dim == 0 && x.index == 0) q.at(1, 1) = cd(1.0, 0.0);
    return q;
  };
  measure_family(jumpy);
  CHECK_THROWS_AS(k0_class(jumpy, 1), AfbError);
}

TEST_CASE("mishchenko projection is exact for cocycles and bounded beyond") {
  for (const char* name : {"circle", "sphere", "torus", "rp2"}) {
    const SimplicialComplex k = corpus_complex(name);
    const Presentation pres = presentation_from_complex(k);
    const AlmostFlatBundle b = random_bundle(k, GradedSpace{1, 1, 2}, 31);
    const AlmostRepresentation rep = associated_rep(b, pres);
    const ProjectionFamily fam = mishchenko_family(k, pres, rep, 2);
    CAPTURE(name);
    CHECK(fam.sa_defect < 1e-12);
    CHECK(fam.tolerance < 1e-12);
  }

  const SimplicialComplex k = corpus_complex("sphere");
  const Presentation pres = presentation_from_complex(k);
  RandomBundleOptions opts;
  opts.epsilon_target = 0.1;
  const AlmostFlatBundle b = random_bundle(k, GradedSpace{1, 1, 1}, 31, opts);
  const AlmostRepresentation rep = associated_rep(b, pres);
  const RelationReport rel = relation_defect(rep, pres);
  CHECK(rel.max_defect > 1e-6);
  const ProjectionFamily fam = mishchenko_family(k, pres, rep, 2);
  CHECK(fam.sa_defect < 1e-12);
  CHECK(fam.tolerance <= k.n * rel.max_defect + 1e-8);
}

TEST_CASE("p_tilde family obeys the same exactness and bound") {
  const GradedSpace w{1, 1, 2};
  RandomBundleOptions sym;
  sym.symmetric_blocks = true;

  for (const char* name : {"circle", "sphere", "torus"}) {
    const SimplicialComplex k = corpus_complex(name);
    const AlmostFlatBundle b = random_bundle(k, w, 33, sym);
    const IndexInput route = p_tilde_route(b, symmetry_datum(k, w), 0, 0, 2);
    CAPTURE(name);
    CHECK(route.family.sa_defect < 1e-12);
    CHECK(route.family.tolerance < 1e-12);
    CHECK(route.dt.commutator_corner < 1e-9);
  }

  // the circle has no triangles, so p_tilde stays an exact projection at
  // any flatness budget
  const SimplicialComplex circle = corpus_complex("circle");
  RandomBundleOptions bent = sym;
  bent.epsilon_target = 0.4;
  const AlmostFlatBundle bc = random_bundle(circle, w, 35, bent);
  const IndexInput rc = p_tilde_route(bc, symmetry_datum(circle, w), 0, 0, 2);
  CHECK(rc.family.tolerance < 1e-12);

  // on a surface the defect scales with the cocycle defect
  const SimplicialComplex sphere = corpus_complex("sphere");
  RandomBundleOptions small = sym;
  small.epsilon_target = 0.05;
  const AlmostFlatBundle bs = random_bundle(sphere, w, 35, small);
  const FlatnessReport fr = flatness_defect(bs);
  CHECK(fr.delta3 > 1e-6);
  const IndexInput rs = p_tilde_route(bs, symmetry_datum(sphere, w), 0, 0, 2);
  CHECK(rs.family.sa_defect < 1e-12);
  CHECK(rs.family.tolerance <= sphere.n * fr.delta3 + 1e-8);
}

TEST_CASE("both index routes agree as exact K0 classes") {
  const GradedSpace w{1, 1, 2};
  RandomBundleOptions sym;
  sym.symmetric_blocks = true;
  for (const char* name : {"circle", "triangle", "sphere", "torus", "rp2"}) {
    const SimplicialComplex k = corpus_complex(name);
    const Presentation pres = presentation_from_complex(k);
    const AlmostFlatBundle b = random_bundle(k, w, 37, sym);
    const FredholmDatum d = symmetry_datum(k, w);

    const IndexInput route = p_tilde_route(b, d, 0, pres.basepoint, 1);
    const K0Diff a =
        index_from_projection(route.family, route.t_sym, route.grading, w.m);
    const OperatorFamily famB = fredholm_index_family(b, d, pres, 1);
    const K0Diff bb =
        index_family_svd(famB, Grading::repeat(Grading::of(w), k.n), w.m);
    CAPTURE(name);
    CHECK(invariant_equal(a, bb));
    CHECK(a.rank() == bb.rank());
  }
}

TEST_CASE("rho_sharp flattens exactly on representations") {
  const GradedSpace w{1, 1, 2};
  Rng rng(41);
  AlmostRepresentation rep;
  rep.fiber = w;
  rep.images = {haar_even_unitary(rng, w)};

  const RhoSharpResult unit = rho_sharp(rep, GroupAlgebraElement::unit(1));
  CHECK(unit.gate < 1e-12);
  CHECK(unit.idempotency < 1e-12);
  CHECK(std::llround(unit.projection.trace().real() / w.m) == w.d0 + w.d1);

  // averaging element (1 + g)/2 for an exact order-two image: projection
  AlmostRepresentation invol;
  invol.fiber = w;
  CMatrix s = CMatrix::identity(w.dim());
  s.at(1, 1) = cd(-1.0, 0.0);
  s.at(3, 3) = cd(-1.0, 0.0);
  invol.images = {s};
  GroupAlgebraElement avg;
  avg.k = 1;
  CMatrix half(1, 1);
  half.at(0, 0) = cd(0.5, 0.0);
  avg.support[{}] = half;
  avg.support[{1}] = half;
  const RhoSharpResult r = rho_sharp(invol, avg);
  CHECK(r.gate < 1e-12);
  CHECK(r.idempotency < 1e-12);
  CHECK(std::llround(r.projection.trace().real() / w.m) == 1);

  // sign representation averages to zero
  AlmostRepresentation sign;
  sign.fiber = w;
  CMatrix neg = CMatrix::identity(w.dim());
  for (int i = 0; i < w.dim(); ++i) neg.at(i, i) = cd(-1.0, 0.0);
  sign.images = {neg};
  const RhoSharpResult z = rho_sharp(sign, avg);
  CHECK(z.gate < 1e-12);
  CHECK(std::llround(z.projection.trace().real() / w.m) == 0);
}

TEST_CASE("rho_sharp trips the gate and the cut where it must") {
  const GradedSpace w{1, 1, 1};
  auto rot = [&](double phi) {
    AlmostRepresentation rep;
    rep.fiber = w;
    CMatrix u(2, 2);
    u.at(0, 0) = cd(std::cos(phi), std::sin(phi));
    u.at(1, 1) = cd(std::cos(phi), -std::sin(phi));
    rep.images = {u};
    return rep;
  };
  CMatrix half(1, 1);
  half.at(0, 0) = cd(0.5, 0.0);
  GroupAlgebraElement avg;
  avg.k = 1;
  avg.support[{}] = half;
  avg.support[{1}] = half;

  // symmetrized spectrum is {(1 + cos phi)/2}; phi = 0.3 stays clear of the
  // cut, phi = acos(0.1) lands at 0.55, inside the gap around 1/2
  CHECK(rho_sharp(rot(0.3), avg).idempotency < 1e-12);
  bool threw = false;
  try {
    rho_sharp(rot(std::acos(0.1)), avg);
  } catch (const AfbError& e) {
    threw = true;
    CHECK(e.kind == "CutViolation");
  }
  CHECK(threw);

  // a negated average pushes the spectrum to -(1 + cos phi)/2, far outside
  // the band where x^2 - x stays small
  GroupAlgebraElement bad;
  bad.k = 1;
  CMatrix mhalf(1, 1);
  mhalf.at(0, 0) = cd(-0.5, 0.0);
  bad.support[{}] = mhalf;
  bad.support[{1}] = mhalf;
  threw = false;
  try {
    rho_sharp(rot(0.3), bad);
  } catch (const AfbError& e) {
    threw = true;
    CHECK(e.kind == "GateViolation");
  }
  CHECK(threw);
}

TEST_CASE("pairing reads rank at points and chern on cycles") {
  K0Diff cls;
  cls.pos.rank = 3;
  cls.pos.chern["fundamental"] = -1;
  cls.neg.rank = 1;
  cls.neg.chern["fundamental"] = 1;
  KHomologyClass pt;
  CHECK(pairing(pt, cls) == 2);
  KHomologyClass fund{KHomologyClass::Kind::Fundamental, "fundamental"};
  CHECK(pairing(fund, cls) == -2);
}

TEST_CASE("main theorem bounds hold across flatness budgets") {
  const GradedSpace w{1, 1, 2};
  for (const char* name : {"circle", "sphere", "torus"}) {
    for (double eps : {0.0, 0.05}) {
      const SimplicialComplex k = corpus_complex(name);
      const Presentation pres = presentation_from_complex(k);
      RandomBundleOptions opts;
      opts.symmetric_blocks = true;
      opts.epsilon_target = eps;
      const AlmostFlatBundle b = random_bundle(k, w, 43, opts);
      const MainTheoremReport r = main_theorem_check(
          b, symmetry_datum(k, w), pres, sample_points(k, 1));
      CAPTURE(name);
      CAPTURE(eps);
      CHECK(r.pass);
      CHECK(r.edge_block_max <= r.edge_block_bound);
      CHECK(r.projection_max <= r.projection_bound);
    }
  }
}

TEST_CASE("dadarlat pairing equality on desk examples") {
  GroupAlgebraElement zero;
  zero.k = 1;

  // contractible complex, balanced fiber: both sides vanish and agree
  const GradedSpace w1{1, 1, 1};
  const SimplicialComplex tri = corpus_complex("triangle");
  const Presentation tp = presentation_from_complex(tri);
  const AlmostFlatBundle tb = random_bundle(tri, w1, 47);
  const DadarlatReport dr =
      dadarlat_check(tb, symmetry_datum(tri, w1), tp, KHomologyClass{},
                     GroupAlgebraElement::unit(1), zero);
  CHECK(dr.equal);
  CHECK(dr.lhs == dr.rhs);
  CHECK(dr.lhs == w1.d0 - w1.d1);

  // zero datum over an unbalanced fiber: the point pairing counts d0 - d1
  const GradedSpace wu{2, 1, 1};
  const AlmostFlatBundle ub = random_bundle(tri, wu, 47);
  FredholmDatum zd;
  zd.f_at.assign(tri.n, CMatrix(wu.dim(), wu.dim()));
  const DadarlatReport ur = dadarlat_check(ub, zd, tp, KHomologyClass{},
                                           GroupAlgebraElement::unit(1), zero);
  CHECK(ur.equal);
  CHECK(ur.lhs == wu.d0 - wu.d1);

  // torus fundamental class against the unit element: zero on both sides
  const GradedSpace w2{1, 1, 2};
  const SimplicialComplex torus = corpus_complex("torus");
  const Presentation op = presentation_from_complex(torus);
  RandomBundleOptions sym;
  sym.symmetric_blocks = true;
  const AlmostFlatBundle ob = random_bundle(torus, w2, 47, sym);
  const DadarlatReport orr = dadarlat_check(
      ob, symmetry_datum(torus, w2), op,
      KHomologyClass{KHomologyClass::Kind::Fundamental, "fundamental"},
      GroupAlgebraElement::unit(1), zero);
  CHECK(orr.equal);
  CHECK(orr.lhs == 0);
}

TEST_CASE("measure_family records the worst sample defects") {
  const SimplicialComplex k = corpus_complex("triangle");

  ProjectionFamily soft;
  soft.complex = k;
  soft.samples = sample_points(k, 1);
  soft.value = [](const Point& x) {
    CMatrix p(2, 2);
    p.at(0, 0) = cd(1.0, 0.0);
    if (x.dim == 2) p.at(1, 1) = cd(0.5, 0.0);
    return p;
  };
  measure_family(soft);
  CHECK(soft.tolerance == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(soft.sa_defect < 1e-15);

  ProjectionFamily skew;
  skew.complex = k;
  skew.samples = sample_points(k, 1);
  skew.value = [](const Point& x) {
    CMatrix p(2, 2);
    p.at(0, 0) = cd(1.0, 0.0);
    if (x.dim == 2) p.at(0, 1) = cd(0.25, 0.0);
    return p;
  };
  measure_family(skew);
  // Frobenius convention: || P - P* ||_F = 0.25 sqrt(2)
  CHECK(skew.sa_defect == doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-10));
}
