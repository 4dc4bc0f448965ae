#include "afb/bundle.hpp"

#include <cmath>

#include "afb/eig.hpp"
#include "afb/random.hpp"

namespace afb {

CMatrix AlmostFlatBundle::t(int v, int w) const {
  if (v == w) return CMatrix::identity(fiber.dim());
  const int e = complex.edge_index(v, w);
  if (e < 0) fail("InputError", "transport over a non-edge");
  return v < w ? transition[e] : transition[e].adjoint();
}

FlatnessReport flatness_defect(const AlmostFlatBundle& b, double unitary_tol) {
  FlatnessReport rep;
  const Grading g = Grading::of(b.fiber);
  for (const auto& t : b.transition) {
    rep.unitary_defect = std::max(rep.unitary_defect, unitary_defect(t));
    rep.parity_defect = std::max(rep.parity_defect, even_defect(t, g));
  }
  if (rep.unitary_defect > unitary_tol)
    fail("UnitaryDefect", "transition unitarity defect " +
                              std::to_string(rep.unitary_defect));
  if (rep.parity_defect > unitary_tol)
    fail("ParityDefect", "transition parity defect " +
                             std::to_string(rep.parity_defect));

  const CMatrix id = CMatrix::identity(b.fiber.dim());
  rep.per_triangle.assign(b.complex.triangles.size(), 0.0);
  for (int ti = 0; ti < int(b.complex.triangles.size()); ++ti) {
    const auto& tri = b.complex.triangles[ti];
    const CMatrix hol = b.t(tri[2], tri[0]) * b.t(tri[1], tri[2]) *
                        b.t(tri[0], tri[1]);
    const double d = op_norm(hol - id);
    rep.per_triangle[ti] = d;
    if (d > rep.epsilon) {
      rep.epsilon = d;
      rep.worst_triangle = ti;
    }
    // cocycle defect over the ordered triples of this triangle
    const int js[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                          {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& o : js) {
      const int vj = tri[o[0]], vl = tri[o[1]], vk = tri[o[2]];
      const double dd =
          op_norm(b.t(vl, vk) * b.t(vj, vl) - b.t(vj, vk));
      rep.delta3 = std::max(rep.delta3, dd);
    }
  }
  return rep;
}

CMatrix transport(const AlmostFlatBundle& b, const SimplicialPath& path) {
  if (path.vertices.empty()) fail("InputError", "empty path");
  CMatrix acc = CMatrix::identity(b.fiber.dim());
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
    acc = b.t(path.vertices[i], path.vertices[i + 1]) * acc;
  return acc;
}

LoopBoundReport transport_loop_bound(const AlmostFlatBundle& b,
                                     const Presentation& pres,
                                     const SimplicialPath& loop,
                                     const FillingCertificate& cert) {
  const Word w = loop_to_word(b.complex, pres, loop);
  LoopBoundReport rep;
  rep.steps = verify_filling(b.complex, pres, cert, w);
  rep.epsilon = flatness_defect(b).epsilon;
  rep.measured =
      op_norm(transport(b, loop) - CMatrix::identity(b.fiber.dim()));
  rep.bound = rep.steps * rep.epsilon;
  return rep;
}

namespace {

// even unitary with a prescribed block structure in B-summand units; each
// sub-block is an independent Haar draw
CMatrix haar_even_blocked(Rng& rng, const GradedSpace& w,
                          const std::vector<int>& even_subblocks) {
  if (even_subblocks.empty()) return haar_even_unitary(rng, w);
  int total = 0;
  for (int s : even_subblocks) total += s;
  if (total != w.d0) fail("InputError", "even sub-blocks do not sum to d0");
  CMatrix u(0, 0);
  for (int s : even_subblocks)
    u = CMatrix::direct_sum(u, haar_unitary(rng, s * w.m));
  u = CMatrix::direct_sum(u, haar_unitary(rng, w.dim1()));
  return u;
}

} // namespace

AlmostFlatBundle random_bundle(const SimplicialComplex& k,
                               const GradedSpace& fiber, uint64_t seed,
                               const RandomBundleOptions& opts) {
  if (opts.symmetric_blocks && fiber.d0 != fiber.d1)
    fail("InputError", "symmetric blocks need d0 == d1");
  AlmostFlatBundle b;
  b.complex = k;
  b.fiber = fiber;
  Rng rng(seed);
  const Presentation pres = presentation_from_complex(k, 0);
  const int ngen = pres.n_generators();
  std::vector<CMatrix> images(ngen);

  if (k.triangles.empty()) {
    // free fundamental group: independent Haar images
    for (int g = 0; g < ngen; ++g) {
      CMatrix u0 = haar_even_blocked(rng, GradedSpace{fiber.d0, 0, fiber.m},
                                     opts.even_subblocks);
      CMatrix u1 = opts.symmetric_blocks ? u0
                                         : haar_unitary(rng, fiber.dim1());
      images[g] = CMatrix::direct_sum(u0, u1);
    }
  } else {
    // factor through H1 so every relator maps exactly to the identity:
    // commuting images are simultaneous diagonals in a random Haar basis
    const H1Coords h1 = h1_of_presentation(pres);
    const int nt = int(h1.moduli.size());
    const int nf = h1.free_rank;

    struct BlockDraw {
      CMatrix basis;
      std::vector<std::vector<double>> phase;  // per factor, per diagonal
    };
    auto draw_block = [&](int dim) {
      BlockDraw bd;
      bd.basis = haar_unitary(rng, dim);
      bd.phase.assign(std::size_t(nt + nf), {});
      for (int i = 0; i < nt; ++i) {
        auto& ph = bd.phase[i];
        ph.resize(std::size_t(dim));
        for (double& x : ph) {
          const auto q = uint64_t(h1.moduli[i]);
          x = 2.0 * 3.14159265358979323846 * double(rng.next_below(q)) /
              double(q);
        }
      }
      for (int i = 0; i < nf; ++i) {
        auto& ph = bd.phase[nt + i];
        ph.resize(std::size_t(dim));
        for (double& x : ph)
          x = 2.0 * 3.14159265358979323846 * rng.next_double();
      }
      return bd;
    };
    auto image_of = [&](const BlockDraw& bd, const std::vector<int64_t>& c) {
      const int dim = bd.basis.rows();
      CMatrix d(dim, dim);
      for (int e = 0; e < dim; ++e) {
        double phi = 0;
        for (int i = 0; i < nt + nf; ++i) phi += double(c[i]) * bd.phase[i][e];
        d.at(e, e) = cd(std::cos(phi), std::sin(phi));
      }
      return bd.basis * d * bd.basis.adjoint();
    };

    std::vector<BlockDraw> ev;
    std::vector<int> sizes = opts.even_subblocks;
    if (sizes.empty()) sizes = {fiber.d0};
    for (int s : sizes) ev.push_back(draw_block(s * fiber.m));
    BlockDraw od;
    if (!opts.symmetric_blocks && fiber.d1 > 0) od = draw_block(fiber.dim1());

    for (int g = 0; g < ngen; ++g) {
      CMatrix u0(0, 0);
      for (auto& bd : ev)
        u0 = CMatrix::direct_sum(u0, image_of(bd, h1.gen_coords[g]));
      CMatrix u1 = opts.symmetric_blocks
                       ? u0
                       : (fiber.d1 > 0 ? image_of(od, h1.gen_coords[g])
                                       : CMatrix(0, 0));
      images[g] = CMatrix::direct_sum(u0, u1);
    }
  }

  b.transition.assign(k.edges.size(), CMatrix());
  for (int e = 0; e < int(k.edges.size()); ++e) {
    if (pres.gen_of_edge[e] < 0)
      b.transition[e] = CMatrix::identity(fiber.dim());
    else
      b.transition[e] = images[pres.gen_of_edge[e]];
  }
  if (opts.epsilon_target > 0)
    for (int e = 0; e < int(k.edges.size()); ++e)
      if (pres.gen_of_edge[e] >= 0)
        b.transition[e] =
            even_unitary_step(rng, fiber, opts.epsilon_target / 3.0) *
            b.transition[e];
  return b;
}

FredholmCheckReport fredholm_check(const AlmostFlatBundle& b,
                                   const FredholmDatum& datum, double tol) {
  if (int(datum.f_at.size()) != b.complex.n)
    fail("InputError", "datum size mismatch");
  FredholmCheckReport rep;
  rep.tau = datum.ideal.tau;
  const Grading g = Grading::of(b.fiber);
  const CMatrix k = corner_projector(b.fiber, datum.ideal);
  const CMatrix id = CMatrix::identity(b.fiber.dim());
  for (const auto& f : datum.f_at) {
    rep.odd_defect = std::max(rep.odd_defect, odd_defect(f, g));
    rep.sa_defect = std::max(rep.sa_defect, self_adjoint_defect(f));
    rep.square_corner =
        std::max(rep.square_corner, corner_distance(f * f - id, k));
  }
  for (int e = 0; e < int(b.complex.edges.size()); ++e) {
    const int v = b.complex.edges[e][0], w = b.complex.edges[e][1];
    const CMatrix dev =
        b.t(v, w) * datum.f_at[v] * b.t(w, v) - datum.f_at[w];
    rep.edge_corner = std::max(rep.edge_corner, corner_distance(dev, k));
  }
  rep.pass = rep.odd_defect <= tol && rep.sa_defect <= tol &&
             rep.square_corner <= rep.tau && rep.edge_corner <= rep.tau;
  return rep;
}

CMatrix pushforward_operator(const CMatrix& a, const GradedSpace& fiber,
                             const BlockEmbedding& f, bool unitalize) {
  const int d = fiber.d0 + fiber.d1, m = fiber.m, mp = f.m_to;
  if (f.r * m > mp) fail("InputError", "embedding does not fit");
  if (a.rows() != d * m) fail("ShapeMismatch", "pushforward operator");
  CMatrix out(d * mp, d * mp);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const CMatrix blk = a.block(i * m, j * m, m, m);
      for (int c = 0; c < f.r; ++c)
        out.set_block(i * mp + c * m, j * mp + c * m, blk);
    }
  if (unitalize)
    for (int i = 0; i < d; ++i)
      for (int t = f.r * m; t < mp; ++t) out.at(i * mp + t, i * mp + t) = cd(1, 0);
  return out;
}

AlmostFlatBundle pushforward_bundle(const AlmostFlatBundle& b,
                                    const BlockEmbedding& f) {
  AlmostFlatBundle out;
  out.complex = b.complex;
  out.fiber = GradedSpace{b.fiber.d0, b.fiber.d1, f.m_to};
  for (const auto& t : b.transition)
    out.transition.push_back(pushforward_operator(t, b.fiber, f, true));
  return out;
}

FredholmDatum pushforward_datum(const FredholmDatum& datum,
                                const GradedSpace& fiber,
                                const BlockEmbedding& f) {
  FredholmDatum out;
  out.ideal = datum.ideal;
  for (const auto& fv : datum.f_at)
    out.f_at.push_back(pushforward_operator(fv, fiber, f, false));
  return out;
}

} // namespace afb
