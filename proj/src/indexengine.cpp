#include "afb/indexengine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace afb {

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

// Group algebra ---------------------------------------------------------------

double GroupAlgebraElement::l1_norm() const {
  double s = 0.0;
  for (const auto& [w, c] : support) s += op_norm(c);
  return s;
}

GroupAlgebraElement GroupAlgebraElement::adjoint() const {
  GroupAlgebraElement out;
  out.k = k;
  for (const auto& [w, c] : support) out.support[inverse_word(w)] = c.adjoint();
  return out;
}

GroupAlgebraElement GroupAlgebraElement::unit(int k) {
  GroupAlgebraElement out;
  out.k = k;
  out.support[Word{}] = CMatrix::identity(k);
  return out;
}

CMatrix rho_hat(const AlmostRepresentation& rep,
                const GroupAlgebraElement& a) {
  const int dim = rep.fiber.dim();
  CMatrix out(a.k * dim, a.k * dim);
  for (const auto& [w, c] : a.support) {
    if (c.rows() != a.k || c.cols() != a.k)
      fail("ShapeMismatch", "group algebra coefficient");
    out += CMatrix::kron(c, evaluate(rep, w));
  }
  return out;
}

RhoSharpResult rho_sharp(const AlmostRepresentation& rep,
                         const GroupAlgebraElement& p,
                         const ScalarFn::Cut& cut) {
  const CMatrix h = rho_hat(rep, p);
  const CMatrix pt = (h + h.adjoint()) * cd(0.5, 0.0);
  RhoSharpResult out;
  out.gate = op_norm(pt * pt - pt);
  if (out.gate >= 0.25)
    fail("GateViolation", "|| ptilde^2 - ptilde || = " +
                              std::to_string(out.gate) + " >= 1/4");
  out.projection = functional_calculus(pt, step_fn(cut.point, cut.gap));
  out.idempotency = op_norm(out.projection * out.projection - out.projection);
  return out;
}

double rho_sharp_commutator(const FredholmRepresentation& fr,
                            const GroupAlgebraElement& p,
                            const ScalarFn::Cut& cut) {
  const RhoSharpResult rs = rho_sharp(fr.rep, p, cut);
  const CMatrix ff = CMatrix::kron(CMatrix::identity(p.k), fr.f);
  const CMatrix comm = rs.projection * ff - ff * rs.projection;
  const CMatrix k = corner_projector_copies(fr.rep.fiber, fr.ideal, p.k);
  return corner_distance(comm, k);
}

// Families --------------------------------------------------------------------

void measure_family(ProjectionFamily& fam) {
  fam.tolerance = 0.0;
  fam.sa_defect = 0.0;
  for (const Point& x : fam.samples) {
    const CMatrix v = fam.value(x);
    fam.tolerance = std::max(fam.tolerance, op_norm(v * v - v));
    fam.sa_defect = std::max(fam.sa_defect, self_adjoint_defect(v));
  }
}

// Mishchenko projection --------------------------------------------------------

CMatrix mishchenko_projection(const SimplicialComplex& k,
                              const Presentation& pres,
                              const AlmostRepresentation& rep,
                              const Point& x) {
  const std::vector<double> lambda = barycentric_coords(k, x);
  const int d = rep.fiber.dim();
  CMatrix out(k.n * d, k.n * d);
  for (int j = 0; j < k.n; ++j) {
    if (lambda[j] <= 0.0) continue;
    for (int l = 0; l < k.n; ++l) {
      if (lambda[l] <= 0.0) continue;
      const Word w = word_for_edge(k, pres, l, j);
      const double s = std::sqrt(lambda[j] * lambda[l]);
      out.set_block(j * d, l * d, evaluate(rep, w) * cd(s, 0.0));
    }
  }
  return out;
}

ProjectionFamily mishchenko_family(const SimplicialComplex& k,
                                   const Presentation& pres,
                                   const AlmostRepresentation& rep,
                                   int level) {
  ProjectionFamily fam;
  fam.complex = k;
  fam.samples = sample_points(k, level);
  auto state = std::make_shared<std::pair<Presentation, AlmostRepresentation>>(
      pres, rep);
  const SimplicialComplex kc = k;
  fam.value = [state, kc](const Point& x) {
    return mishchenko_projection(kc, state->first, state->second, x);
  };
  measure_family(fam);
  return fam;
}

// Dressed transitions ----------------------------------------------------------

CMatrix DressedTransitions::t(const SimplicialComplex& k, int v, int w) const {
  if (v == w)
    return dressing.dress(
        pad_embed(CMatrix::identity(this->w.dim()), this->w, w_pad,
                  Fill::Zero));
  const int e = k.edge_index(v, w);
  if (e < 0) fail("InputError", "dressed transport over a non-edge");
  return v < w ? psi[e] : psi[e].adjoint();
}

DressedTransitions dressed_transitions(const AlmostFlatBundle& b,
                                       const FredholmDatum& datum, int pad,
                                       int base_vertex) {
  const FredholmCheckReport chk = fredholm_check(b, datum);
  if (!chk.pass)
    fail("FredholmInvariant",
         "datum fails the corner compatibility checks (square " +
             std::to_string(chk.square_corner) + ", edge " +
             std::to_string(chk.edge_corner) + ")");
  DressedTransitions dt;
  dt.w = b.fiber;
  dt.w_pad = GradedSpace{b.fiber.d0 + pad, b.fiber.d1 + pad, b.fiber.m};
  dt.f_prime =
      pad_embed(datum.f_at[base_vertex], dt.w, dt.w_pad, Fill::IdentityOdd);
  dt.dressing = make_dressing(dt.f_prime, dt.w_pad);
  const CMatrix kc =
      corner_projector_copies(dt.w_pad, datum.ideal, 4);
  for (const CMatrix& tr : b.transition) {
    const CMatrix p =
        dt.dressing.dress(pad_embed(tr, dt.w, dt.w_pad, Fill::Zero));
    const CMatrix comm = p * dt.dressing.t - dt.dressing.t * p;
    dt.commutator_corner =
        std::max(dt.commutator_corner, corner_distance(comm, kc));
    dt.psi.push_back(p);
  }
  return dt;
}

CMatrix p_tilde_E(const AlmostFlatBundle& b, const DressedTransitions& dt,
                  const Point& x) {
  const std::vector<double> lambda = barycentric_coords(b.complex, x);
  const int d = dt.dressing.udim();
  const CMatrix one = dt.t(b.complex, 0, 0);
  CMatrix out(b.complex.n * d, b.complex.n * d);
  for (int j = 0; j < b.complex.n; ++j) {
    if (lambda[j] <= 0.0) continue;
    for (int l = 0; l < b.complex.n; ++l) {
      if (lambda[l] <= 0.0) continue;
      const double s = std::sqrt(lambda[j] * lambda[l]);
      const CMatrix blk = (j == l) ? one : dt.t(b.complex, l, j);
      out.set_block(j * d, l * d, blk * cd(s, 0.0));
    }
  }
  return out;
}

IndexInput p_tilde_route(const AlmostFlatBundle& b, const FredholmDatum& datum,
                         int pad, int base_vertex, int level) {
  IndexInput out;
  out.dt = dressed_transitions(b, datum, pad, base_vertex);
  out.family.complex = b.complex;
  out.family.samples = sample_points(b.complex, level);
  auto state =
      std::make_shared<std::pair<AlmostFlatBundle, DressedTransitions>>(b,
                                                                        out.dt);
  out.family.value = [state](const Point& x) {
    return p_tilde_E(state->first, state->second, x);
  };
  measure_family(out.family);
  out.t_sym =
      CMatrix::kron(CMatrix::identity(b.complex.n), out.dt.dressing.t);
  out.grading = Grading::repeat(out.dt.dressing.g_u, b.complex.n);
  return out;
}

// K0 invariants -----------------------------------------------------------------

namespace {

cd det(CMatrix a) {
  const int n = a.rows();
  cd out(1.0, 0.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a.at(r, c)) > std::abs(a.at(piv, c))) piv = r;
    if (std::abs(a.at(piv, c)) == 0.0) return cd(0.0, 0.0);
    if (piv != c) {
      for (int j = c; j < n; ++j) std::swap(a.at(piv, j), a.at(c, j));
      out = -out;
    }
    out *= a.at(c, c);
    for (int r = c + 1; r < n; ++r) {
      const cd f = a.at(r, c) / a.at(c, c);
      for (int j = c; j < n; ++j) a.at(r, j) -= f * a.at(c, j);
    }
  }
  return out;
}

std::vector<int64_t> point_key(const SimplicialComplex& k, const Point& p) {
  const std::vector<double> bary = barycentric_coords(k, p);
  std::vector<int64_t> key(bary.size());
  for (std::size_t i = 0; i < bary.size(); ++i)
    key[i] = int64_t(std::llround(bary[i] * 4294967296.0));
  return key;
}

} // namespace

int K0Diff::chern_on(const std::string& cycle) const {
  const auto ip = pos.chern.find(cycle);
  const auto in = neg.chern.find(cycle);
  if (ip == pos.chern.end() || in == neg.chern.end())
    fail("MissingCycle", "no Chern number computed for cycle " + cycle);
  return ip->second - in->second;
}

bool invariant_equal(const K0Diff& a, const K0Diff& b) {
  if (a.rank() != b.rank()) return false;
  std::map<std::string, int> ca, cb;
  for (const auto& [n, v] : a.pos.chern) ca[n] += v;
  for (const auto& [n, v] : a.neg.chern) ca[n] -= v;
  for (const auto& [n, v] : b.pos.chern) cb[n] += v;
  for (const auto& [n, v] : b.neg.chern) cb[n] -= v;
  return ca == cb;
}

ChernResult chern_number(const ProjectionFamily& fam, const std::string& cycle,
                         const ChernOptions& opts) {
  const auto it = fam.complex.cycles.find(cycle);
  if (it == fam.complex.cycles.end())
    fail("MissingCycle", "cycle " + cycle + " is not registered");
  if (it->second.empty()) return {0, 0.0, opts.min_level};

  const Point probe =
      mesh_triangle(fam.complex, it->second.front().first, 1)[0].corner[0];
  const int rank = int(std::llround(fam.value(probe).trace().real()));
  if (rank == 0) return {0, 0.0, opts.min_level};

  std::string stall;
  for (int level = opts.min_level; level <= opts.max_level; ++level) {
    std::map<std::vector<int64_t>, CMatrix> frames;
    auto frame_at = [&](const Point& p) -> const CMatrix& {
      const auto key = point_key(fam.complex, p);
      auto f = frames.find(key);
      if (f == frames.end())
        f = frames.emplace(key, range_frame(fam.value(p), rank)).first;
      return f->second;
    };
    double total = 0.0;
    bool degenerate = false;
    for (const auto& [tri, sign] : it->second) {
      for (const MeshTriangle& mt : mesh_triangle(fam.complex, tri, level)) {
        const CMatrix& va = frame_at(mt.corner[0]);
        const CMatrix& vb = frame_at(mt.corner[1]);
        const CMatrix& vc = frame_at(mt.corner[2]);
        const CMatrix uab = va.adjoint() * vb;
        const CMatrix ubc = vb.adjoint() * vc;
        const CMatrix uca = vc.adjoint() * va;
        if (std::abs(det(uab)) < opts.min_overlap_det ||
            std::abs(det(ubc)) < opts.min_overlap_det ||
            std::abs(det(uca)) < opts.min_overlap_det) {
          degenerate = true;
          break;
        }
        total += double(sign) * std::arg(det(uab * ubc * uca));
      }
      if (degenerate) break;
    }
    if (degenerate) {
      stall = "degenerate frame overlap";
      continue;
    }
    total /= 2.0 * kPi;
    const double residual = std::abs(total - std::llround(total));
    if (residual <= opts.residual_tol)
      return {int(std::llround(total)), residual, level};
    stall = "residual " + std::to_string(residual);
  }
  fail("ChernRefinement",
       "cycle " + cycle + " did not stabilize by level " +
           std::to_string(opts.max_level) + " (" + stall + ")");
}

K0Class k0_class(const ProjectionFamily& fam, int m,
                 const ChernOptions& opts) {
  if (fam.samples.empty()) fail("InputError", "family without samples");
  K0Class out;
  bool first = true;
  for (const Point& x : fam.samples) {
    const double r = fam.value(x).trace().real() / double(m);
    const int ri = int(std::llround(r));
    if (first) {
      out.rank = ri;
      first = false;
    } else if (ri != out.rank) {
      fail("RankJump", "normalized trace jumps between samples");
    }
    out.rank_residual = std::max(out.rank_residual, std::abs(r - ri));
  }
  if (out.rank_residual > opts.residual_tol)
    fail("ClassResidual",
         "rank residual " + std::to_string(out.rank_residual));
  for (const auto& [name, chain] : fam.complex.cycles) {
    (void)chain;
    const ChernResult c = chern_number(fam, name, opts);
    out.chern[name] = c.value;
    out.chern_residual[name] = c.residual;
  }
  return out;
}

// Index computations -------------------------------------------------------------

K0Diff index_from_projection(const ProjectionFamily& fam, const CMatrix& t_sym,
                             const Grading& g, int m, const ScalarFn::Cut& cut,
                             const ChernOptions& opts) {
  if (fam.tolerance >= 0.25)
    fail("FlattenGate", "family tolerance " + std::to_string(fam.tolerance) +
                            " >= 1/4");
  const std::vector<int> ev = g.even_indices();
  const std::vector<int> od = g.odd_indices();
  const CMatrix f0 = t_sym.submatrix(od, ev);
  const ScalarFn step = step_fn(cut.point, cut.gap);

  // every downstream pass (traces, both split families, their Chern meshes)
  // re-visits the same points, so flatten once per geometric point
  auto cache = std::make_shared<std::map<std::vector<int64_t>, CMatrix>>();
  auto flat = [step, value = fam.value, cache,
               kc = fam.complex](const Point& x) -> CMatrix {
    const auto key = point_key(kc, x);
    auto it = cache->find(key);
    if (it == cache->end())
      it = cache->emplace(key, functional_calculus(value(x), step)).first;
    return it->second;
  };

  bool first = true;
  int trace_rank = 0;
  for (const Point& x : fam.samples) {
    const CMatrix p = flat(x);
    const double tr = (p.submatrix(ev, ev).trace().real() -
                       p.submatrix(od, od).trace().real()) /
                      double(m);
    const int ti = int(std::llround(tr));
    if (std::abs(tr - ti) > opts.residual_tol)
      fail("ClassResidual", "trace difference residual " +
                                std::to_string(std::abs(tr - ti)));
    if (first) {
      trace_rank = ti;
      first = false;
    } else if (ti != trace_rank) {
      fail("RankJump", "trace difference jumps between samples");
    }
  }
  (void)trace_rank;

  ProjectionFamily pos;
  pos.complex = fam.complex;
  pos.samples = fam.samples;
  pos.value = [flat, ev](const Point& x) {
    return flat(x).submatrix(ev, ev);
  };
  measure_family(pos);

  ProjectionFamily neg;
  neg.complex = fam.complex;
  neg.samples = fam.samples;
  neg.value = [flat, od, f0](const Point& x) {
    return f0.adjoint() * flat(x).submatrix(od, od) * f0;
  };
  measure_family(neg);

  return K0Diff{k0_class(pos, m, opts), k0_class(neg, m, opts)};
}

K0Diff index_family_svd(const OperatorFamily& fam, const Grading& g, int m,
                        double gap, const ChernOptions& opts) {
  const std::vector<int> ev = g.even_indices();
  const std::vector<int> od = g.odd_indices();

  struct Split {
    CMatrix p, q;
    int large = 0;
  };
  auto cache = std::make_shared<std::map<std::vector<int64_t>, Split>>();
  auto analyze = [&, cache](const Point& x) -> Split {
    const auto key = point_key(fam.complex, x);
    if (auto it = cache->find(key); it != cache->end()) return it->second;
    const CMatrix a = fam.value(x);
    if (odd_defect(a, g) > 1e-8 || self_adjoint_defect(a) > 1e-8)
      fail("InputError", "family value is not odd self-adjoint");
    const CMatrix f0 = a.submatrix(od, ev);
    const SvdResult s = svd(f0);
    int large;
    const int ns = int(s.sigma.size());
    if (ns == 0 || s.sigma.front() < gap) {
      large = 0;
    } else if (s.sigma.back() >= gap) {
      large = ns;
    } else {
      int cutAt = 0;
      double best = -1.0;
      for (int i = 0; i + 1 < ns; ++i)
        if (s.sigma[i] - s.sigma[i + 1] > best) {
          best = s.sigma[i] - s.sigma[i + 1];
          cutAt = i;
        }
      if (best < gap)
        fail("GapViolation", "singular value split gap " +
                                 std::to_string(best) + " below " +
                                 std::to_string(gap));
      large = cutAt + 1;
    }
    Split out;
    out.large = large;
    out.p = CMatrix::identity(int(ev.size()));
    out.q = CMatrix::identity(int(od.size()));
    for (int i = 0; i < large; ++i) {
      CMatrix vi(int(ev.size()), 1), ui(int(od.size()), 1);
      for (int r = 0; r < int(ev.size()); ++r) vi.at(r, 0) = s.v.at(r, i);
      for (int r = 0; r < int(od.size()); ++r) ui.at(r, 0) = s.u.at(r, i);
      out.p -= vi * vi.adjoint();
      out.q -= ui * ui.adjoint();
    }
    return cache->emplace(key, std::move(out)).first->second;
  };

  bool first = true;
  int large0 = 0;
  for (const Point& x : fam.samples) {
    const Split s = analyze(x);
    if (first) {
      large0 = s.large;
      first = false;
    } else if (s.large != large0) {
      fail("RankJump", "near-zero singular cluster size jumps (" +
                           std::to_string(large0) + " vs " +
                           std::to_string(s.large) + ")");
    }
  }

  ProjectionFamily ker;
  ker.complex = fam.complex;
  ker.samples = fam.samples;
  ker.value = [analyze](const Point& x) { return analyze(x).p; };
  measure_family(ker);

  ProjectionFamily coker;
  coker.complex = fam.complex;
  coker.samples = fam.samples;
  coker.value = [analyze](const Point& x) { return analyze(x).q; };
  measure_family(coker);

  return K0Diff{k0_class(ker, m, opts), k0_class(coker, m, opts)};
}

CMatrix odd_symmetry(const GradedSpace& w) {
  if (w.dim0() != w.dim1())
    fail("InputError", "odd symmetry needs a balanced grading");
  CMatrix t(w.dim(), w.dim());
  for (int i = 0; i < w.dim0(); ++i) {
    t.at(i, w.dim0() + i) = cd(1.0, 0.0);
    t.at(w.dim0() + i, i) = cd(1.0, 0.0);
  }
  return t;
}

OperatorFamily fredholm_index_family(const AlmostFlatBundle& b,
                                     const FredholmDatum& datum,
                                     const Presentation& pres, int level,
                                     const ScalarFn::Cut& cut) {
  if (b.fiber.d0 != b.fiber.d1)
    fail("InputError", "index family needs a balanced fiber");
  OperatorFamily fam;
  fam.complex = b.complex;
  fam.samples = sample_points(b.complex, level);

  struct State {
    AlmostFlatBundle b;
    Presentation pres;
    AlmostRepresentation rep;
    FredholmDatum datum;
    CMatrix tt;
    ScalarFn step;
  };
  auto st = std::make_shared<State>();
  st->b = b;
  st->pres = pres;
  st->rep = associated_rep(b, pres);
  st->datum = datum;
  st->tt = CMatrix::kron(CMatrix::identity(b.complex.n), odd_symmetry(b.fiber));
  st->step = step_fn(cut.point, cut.gap);

  fam.value = [st](const Point& x) {
    const CMatrix near =
        mishchenko_projection(st->b.complex, st->pres, st->rep, x);
    const CMatrix pi = functional_calculus(near, st->step);
    const std::vector<double> lambda = barycentric_coords(st->b.complex, x);
    const int d = st->b.fiber.dim();
    CMatrix ff(st->b.complex.n * d, st->b.complex.n * d);
    for (int j = 0; j < st->b.complex.n; ++j) {
      CMatrix avg(d, d);
      for (int l = 0; l < st->b.complex.n; ++l) {
        if (lambda[l] <= 0.0) continue;
        const CMatrix tr = st->b.t(l, j);
        avg += tr * st->datum.f_at[l] * tr.adjoint() * cd(lambda[l], 0.0);
      }
      ff.set_block(j * d, j * d, avg);
    }
    const CMatrix one = CMatrix::identity(pi.rows());
    return pi * ff * pi + (one - pi) * st->tt * (one - pi);
  };
  return fam;
}

// Pairings and checks -------------------------------------------------------------

int pairing(const KHomologyClass& eta, const K0Diff& cls) {
  if (eta.kind == KHomologyClass::Kind::Point) return cls.rank();
  return cls.chern_on(eta.cycle);
}

MainTheoremReport main_theorem_check(const AlmostFlatBundle& b,
                                     const FredholmDatum& datum,
                                     const Presentation& pres,
                                     const std::vector<Point>& samples,
                                     int pad, double slack) {
  MainTheoremReport rep;
  const DressedTransitions dt =
      dressed_transitions(b, datum, pad, pres.basepoint);
  const AlmostRepresentation rho = associated_rep(b, pres);
  rep.epsilon = flatness_defect(b).epsilon;

  const int d = dt.dressing.udim();
  std::map<std::pair<int, int>, CMatrix> dressed_word;
  auto rho_image = [&](int v, int w) -> const CMatrix& {
    auto it = dressed_word.find({v, w});
    if (it == dressed_word.end()) {
      const Word word = word_for_edge(b.complex, pres, v, w);
      const CMatrix img = dt.dressing.dress(
          pad_embed(evaluate(rho, word), dt.w, dt.w_pad, Fill::Zero));
      it = dressed_word.emplace(std::pair<int, int>{v, w}, img).first;
    }
    return it->second;
  };

  for (const Point& x : samples) {
    const std::vector<double> lambda = barycentric_coords(b.complex, x);
    std::vector<int> carrier;
    for (int j = 0; j < b.complex.n; ++j)
      if (lambda[j] > 0.0) carrier.push_back(j);

    CMatrix pm(b.complex.n * d, b.complex.n * d);
    for (int j : carrier)
      for (int l : carrier) {
        const CMatrix& img = rho_image(l, j);
        if (j != l)
          rep.edge_block_max =
              std::max(rep.edge_block_max,
                       op_norm(img - dt.t(b.complex, l, j)));
        const double s = std::sqrt(lambda[j] * lambda[l]);
        pm.set_block(j * d, l * d, img * cd(s, 0.0));
      }
    rep.projection_max = std::max(
        rep.projection_max, op_norm(pm - p_tilde_E(b, dt, x)));
  }
  rep.edge_block_bound = rep.epsilon + slack;
  rep.projection_bound = b.complex.n * rep.epsilon + slack;
  rep.pass = rep.edge_block_max <= rep.edge_block_bound &&
             rep.projection_max <= rep.projection_bound;
  return rep;
}

DadarlatReport dadarlat_check(const AlmostFlatBundle& b,
                              const FredholmDatum& datum,
                              const Presentation& pres,
                              const KHomologyClass& eta,
                              const GroupAlgebraElement& p,
                              const GroupAlgebraElement& q, int pad,
                              const ScalarFn::Cut& cut) {
  DadarlatReport out;
  const IndexInput route = p_tilde_route(b, datum, pad, pres.basepoint);
  const int m = b.fiber.m;
  const K0Diff ind_e =
      index_from_projection(route.family, route.t_sym, route.grading, m, cut);
  out.lhs = pairing(eta, ind_e);

  const AlmostRepresentation rho = associated_rep(b, pres);
  const int udim = route.dt.dressing.udim();

  auto triple_index = [&](const GroupAlgebraElement& a, double& gate) {
    const RhoSharpResult rs = rho_sharp(rho, a, cut);
    gate = rs.gate;
    // dress each W-block of the k x k projection into the 4-fold space
    CMatrix big(a.k * udim, a.k * udim);
    const int wd = b.fiber.dim();
    for (int i = 0; i < a.k; ++i)
      for (int j = 0; j < a.k; ++j) {
        const CMatrix blk = rs.projection.block(i * wd, j * wd, wd, wd);
        big.set_block(i * udim, j * udim,
                      route.dt.dressing.dress(
                          pad_embed(blk, route.dt.w, route.dt.w_pad,
                                    Fill::Zero)));
      }
    ProjectionFamily fam;
    fam.complex = b.complex;
    fam.samples = route.family.samples;
    fam.value = [big](const Point&) { return big; };
    measure_family(fam);
    const CMatrix tk =
        CMatrix::kron(CMatrix::identity(a.k), route.dt.dressing.t);
    const Grading gk = Grading::repeat(route.dt.dressing.g_u, a.k);
    return index_from_projection(fam, tk, gk, m, cut);
  };

  const K0Diff ind_p = triple_index(p, out.gate_p);
  const K0Diff ind_q = triple_index(q, out.gate_q);
  out.rhs_p = pairing(eta, ind_p);
  out.rhs_q = pairing(eta, ind_q);
  out.rhs = out.rhs_p - out.rhs_q;
  out.equal = out.lhs == out.rhs;
  return out;
}

} // namespace afb
