#include "afb/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "afb/random.hpp"

namespace afb {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = 3.14159265358979323846;

// ----------------------------------------------------------------- corpora

int perm_sign3(std::array<int, 3> t) {
  int s = 1;
  if (t[0] > t[1]) { std::swap(t[0], t[1]); s = -s; }
  if (t[1] > t[2]) { std::swap(t[1], t[2]); s = -s; }
  if (t[0] > t[1]) { std::swap(t[0], t[1]); s = -s; }
  return s;
}

SimplicialComplex make_circle() {
  return SimplicialComplex::from_simplices(3, {{0, 1}, {1, 2}, {0, 2}});
}

SimplicialComplex make_triangle() {
  return SimplicialComplex::from_simplices(3, {{0, 1, 2}});
}

SimplicialComplex make_wedge() {
  return SimplicialComplex::from_simplices(
      5, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}, {0, 4}});
}

SimplicialComplex make_sphere() {
  SimplicialComplex k = SimplicialComplex::from_simplices(
      4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  k.register_cycle("fundamental", {{k.triangle_index(1, 2, 3), 1},
                                   {k.triangle_index(0, 2, 3), -1},
                                   {k.triangle_index(0, 1, 3), 1},
                                   {k.triangle_index(0, 1, 2), -1}});
  return k;
}

// Seven-vertex torus: vertex (x, y) of the square lattice gets the label
// (x + 2y) mod 7; the period lattice is spanned by (-2, 1) and (3, 2), and
// theta(x, y) = ((-2x + 3y) / 7, (x + 2y) / 7) maps it to Z^2.
SimplicialComplex make_torus() {
  auto lab = [](int x, int y) { return ((x + 2 * y) % 7 + 7) % 7; };
  struct Face {
    std::array<int, 3> oriented;                 // labels, positive order
    std::array<std::array<int, 2>, 3> lift;      // matching lattice points
  };
  std::vector<Face> faces;
  for (int i = 0; i < 7; ++i) {
    faces.push_back({{lab(i, 0), lab(i + 1, 0), lab(i + 1, 1)},
                     {{{i, 0}, {i + 1, 0}, {i + 1, 1}}}});
    faces.push_back({{lab(i, 0), lab(i + 1, 1), lab(i, 1)},
                     {{{i, 0}, {i + 1, 1}, {i, 1}}}});
  }
  std::vector<std::vector<int>> sims;
  for (const Face& f : faces) {
    std::vector<int> s(f.oriented.begin(), f.oriented.end());
    std::sort(s.begin(), s.end());
    sims.push_back(s);
  }
  SimplicialComplex k = SimplicialComplex::from_simplices(7, sims);
  k.tri_chart.resize(k.triangles.size());
  std::vector<std::pair<int, int>> chain;
  for (const Face& f : faces) {
    std::array<int, 3> s = f.oriented;
    std::sort(s.begin(), s.end());
    const int idx = k.triangle_index(s[0], s[1], s[2]);
    for (int j = 0; j < 3; ++j) {
      int pos = 0;
      while (f.oriented[pos] != s[j]) ++pos;
      const double x = f.lift[pos][0], y = f.lift[pos][1];
      k.tri_chart[idx][j] = {(-2.0 * x + 3.0 * y) / 7.0, (x + 2.0 * y) / 7.0};
    }
    chain.emplace_back(idx, perm_sign3(f.oriented));
  }
  k.register_cycle("fundamental", chain);
  std::vector<std::pair<int, int>> rev;
  for (const auto& [t, c] : chain) rev.emplace_back(t, -c);
  k.register_cycle("fundamental-rev", rev);
  return k;
}

SimplicialComplex make_rp2() {
  return SimplicialComplex::from_simplices(
      6, {{0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {0, 3, 5}, {0, 4, 5},
          {1, 2, 5}, {1, 3, 4}, {1, 4, 5}, {2, 3, 4}, {2, 3, 5}});
}

// --------------------------------------------------------------- utilities

[[noreturn]] void schema(const std::string& msg) { fail("SchemaError", msg); }

const ordered_json& need(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) schema(std::string("missing field '") + key + "'");
  return *it;
}

std::string need_str(const ordered_json& j, const char* key) {
  const ordered_json& v = need(j, key);
  if (!v.is_string()) schema(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

int64_t need_int(const ordered_json& j, const char* key) {
  const ordered_json& v = need(j, key);
  if (!v.is_number_integer()) schema(std::string("field '") + key + "' must be an integer");
  return v.get<int64_t>();
}

int64_t int_or(const ordered_json& j, const char* key, int64_t d) {
  auto it = j.find(key);
  if (it == j.end()) return d;
  if (!it->is_number_integer()) schema(std::string("field '") + key + "' must be an integer");
  return it->get<int64_t>();
}

double num_or(const ordered_json& j, const char* key, double d) {
  auto it = j.find(key);
  if (it == j.end()) return d;
  if (!it->is_number()) schema(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

std::string str_or(const ordered_json& j, const char* key, const std::string& d) {
  auto it = j.find(key);
  if (it == j.end()) return d;
  if (!it->is_string()) schema(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

bool bool_or(const ordered_json& j, const char* key, bool d) {
  auto it = j.find(key);
  if (it == j.end()) return d;
  if (!it->is_boolean()) schema(std::string("field '") + key + "' must be a boolean");
  return it->get<bool>();
}

// ------------------------------------------------------- scenario building

struct Tol {
  std::map<std::string, double> v;
  double operator()(const std::string& key) const {
    auto it = v.find(key);
    if (it == v.end()) fail("InputError", "unknown tolerance key '" + key + "'");
    return it->second;
  }
};

Tol make_tol(const ordered_json& scenario, const RunOptions& opts) {
  Tol t;
  t.v = {{"unitary", 1e-9}, {"sa", 1e-8},   {"exact", 1e-8},
         {"slack", 1e-8},   {"gate", 0.25}, {"cut", 0.5},
         {"gap", 0.1},      {"chern-residual", 0.01}, {"idem", 1e-9},
         {"tau", 1e-8}};
  auto overlay = [&t](const auto& src) {
    for (const auto& [key, val] : src) {
      if (!t.v.count(key)) fail("InputError", "unknown tolerance key '" + key + "'");
      t.v[key] = val;
    }
  };
  if (auto it = scenario.find("tolerances"); it != scenario.end()) {
    if (!it->is_object()) schema("'tolerances' must be an object");
    std::map<std::string, double> m;
    for (auto f = it->begin(); f != it->end(); ++f) {
      if (!f.value().is_number()) schema("tolerance values must be numbers");
      m[f.key()] = f.value().get<double>();
    }
    overlay(m);
  }
  overlay(opts.tolerances);
  return t;
}

GradedSpace fiber_from_json(const ordered_json& j) {
  if (!j.is_object()) schema("'fiber' must be an object");
  GradedSpace w;
  w.d0 = int(need_int(j, "d0"));
  w.d1 = int(need_int(j, "d1"));
  w.m = int(need_int(j, "m"));
  if (w.d0 < 0 || w.d1 < 0 || w.d0 + w.d1 < 1 || w.m < 1)
    schema("fiber multiplicities must be non-negative with d0 + d1 >= 1, m >= 1");
  return w;
}

Word word_from_json(const ordered_json& j, int n_gens) {
  if (!j.is_array()) schema("a word must be an array of non-zero letters");
  Word w;
  for (const auto& l : j) {
    if (!l.is_number_integer()) schema("word letters must be integers");
    const int v = l.get<int>();
    if (v == 0 || std::abs(v) > n_gens)
      schema("word letter " + std::to_string(v) + " out of range");
    w.push_back(v);
  }
  return reduce_word(w);
}

GroupAlgebraElement element_from_json(const ordered_json& j, int n_gens) {
  if (!j.is_object()) schema("a group algebra element must be an object");
  const std::string kind = need_str(j, "kind");
  const int k = int(int_or(j, "k", 1));
  if (k < 1) schema("element size k must be positive");
  GroupAlgebraElement a;
  a.k = k;
  if (kind == "unit") return GroupAlgebraElement::unit(k);
  if (kind == "zero") return a;
  if (kind == "average") {
    const int letter = int(int_or(j, "letter", 1));
    if (letter == 0 || std::abs(letter) > n_gens)
      schema("average letter out of range");
    const CMatrix half = CMatrix::identity(k) * cd(0.5, 0.0);
    a.support[Word{}] = half;
    a.support[Word{letter}] = half;
    return a;
  }
  if (kind == "terms") {
    const ordered_json& terms = need(j, "terms");
    if (!terms.is_array()) schema("'terms' must be an array");
    for (const auto& t : terms) {
      const Word w = word_from_json(need(t, "word"), n_gens);
      CMatrix c = matrix_from_json(need(t, "coeff"));
      if (c.rows() != k || c.cols() != k) schema("coefficient must be k x k");
      auto it = a.support.find(w);
      if (it == a.support.end())
        a.support.emplace(w, std::move(c));
      else
        it->second += c;
    }
    return a;
  }
  schema("unknown element kind '" + kind + "'");
}

FredholmDatum datum_from_json(const ordered_json& j, const GradedSpace& w,
                              int n_vertices) {
  if (!j.is_object()) schema("'datum' must be an object");
  const std::string kind = need_str(j, "kind");
  CornerIdeal ideal;
  if (auto it = j.find("ideal"); it != j.end()) {
    ideal.c0 = int(int_or(*it, "c0", -1));
    ideal.c1 = int(int_or(*it, "c1", -1));
    ideal.tau = num_or(*it, "tau", ideal.tau);
  }
  CMatrix f(w.dim(), w.dim());
  if (kind == "symmetry") {
    if (w.d0 != w.d1) schema("symmetry datum needs a balanced fiber");
    f = odd_symmetry(w);
  } else if (kind == "kernel") {
    if (w.d0 != w.d1) schema("kernel datum needs a balanced fiber");
    const int r = int(int_or(j, "rank", 1));
    if (r < 0 || r > w.d0) schema("kernel rank out of range");
    for (int i = r * w.m; i < w.dim0(); ++i) {
      f.at(i, w.dim0() + i) = cd(1.0, 0.0);
      f.at(w.dim0() + i, i) = cd(1.0, 0.0);
    }
  } else if (kind == "zero") {
    // all zero
  } else if (kind == "matrices") {
    const ordered_json& fs = need(j, "f");
    if (!fs.is_array() || fs.empty()) schema("'f' must be a non-empty array");
    std::vector<CMatrix> per;
    for (const auto& mj : fs) per.push_back(matrix_from_json(mj));
    for (const CMatrix& x : per)
      if (x.rows() != w.dim() || x.cols() != w.dim())
        schema("datum matrix has the wrong dimension");
    FredholmDatum d;
    d.ideal = ideal;
    if (int(per.size()) == 1)
      d.f_at.assign(n_vertices, per[0]);
    else if (int(per.size()) == n_vertices)
      d.f_at = per;
    else
      schema("'f' must hold one matrix or one per vertex");
    return d;
  } else {
    schema("unknown datum kind '" + kind + "'");
  }
  FredholmDatum d;
  d.f_at.assign(n_vertices, f);
  d.ideal = ideal;
  return d;
}

struct Built {
  std::string name;
  std::string corpus;
  SimplicialComplex k;
  Presentation pres;
  GradedSpace fiber;
  AlmostFlatBundle bundle;
  std::optional<FredholmDatum> datum;
  AlmostRepresentation rep;
  FlatnessReport flat;
  RelationReport rel;
  uint64_t seed = 0;
  double epsilon = 0.0;
};

// Order-two character of H1, pulled back to the generators; the letter (if
// requested) singles out one generator on which it is -1.
std::vector<int> mod2_character(const Presentation& pres) {
  const H1Coords h1 = h1_of_presentation(pres);
  int idx = -1;
  for (int i = 0; i < int(h1.moduli.size()); ++i)
    if (h1.moduli[i] % 2 == 0) { idx = i; break; }
  if (idx < 0)
    fail("InputError", "the complex has no order-two character");
  std::vector<int> sig(pres.n_generators(), 1);
  for (int g = 0; g < pres.n_generators(); ++g)
    if (h1.gen_coords[g][idx] % 2 != 0) sig[g] = -1;
  return sig;
}

AlmostFlatBundle bundle_from_json(const ordered_json& j,
                                  const SimplicialComplex& k,
                                  const Presentation& pres,
                                  const GradedSpace& fiber, uint64_t seed) {
  if (!j.is_object()) schema("'bundle' must be an object");
  const std::string recipe = need_str(j, "recipe");
  const double eps = num_or(j, "epsilon", 0.0);
  if (eps < 0) schema("bundle epsilon must be non-negative");
  if (recipe == "random") {
    RandomBundleOptions opts;
    opts.epsilon_target = eps;
    opts.symmetric_blocks = bool_or(j, "symmetric", false);
    if (auto it = j.find("even-subblocks"); it != j.end()) {
      if (!it->is_array()) schema("'even-subblocks' must be an array");
      for (const auto& b : *it) opts.even_subblocks.push_back(b.get<int>());
    }
    return random_bundle(k, fiber, seed, opts);
  }
  if (recipe != "trivial" && recipe != "sign")
    schema("unknown bundle recipe '" + recipe + "'");
  std::vector<int> sig(pres.n_generators(), 1);
  if (recipe == "sign") sig = mod2_character(pres);
  AlmostFlatBundle b;
  b.complex = k;
  b.fiber = fiber;
  const CMatrix id = CMatrix::identity(fiber.dim());
  for (int e = 0; e < int(k.edges.size()); ++e) {
    if (pres.edge_in_tree[e] || sig[pres.gen_of_edge[e]] > 0)
      b.transition.push_back(id);
    else
      b.transition.push_back(id * cd(-1.0, 0.0));
  }
  if (eps > 0) {
    Rng rng(seed);
    for (int e = 0; e < int(k.edges.size()); ++e)
      if (!pres.edge_in_tree[e])
        b.transition[e] = even_unitary_step(rng, fiber, eps / 3.0) * b.transition[e];
  }
  return b;
}

Built build_scenario(const ordered_json& s) {
  if (!s.is_object()) schema("scenario must be a JSON object");
  Built B;
  B.name = str_or(s, "name", "scenario");
  if (auto it = s.find("corpus"); it != s.end()) {
    B.corpus = it->get<std::string>();
    B.k = corpus_complex(B.corpus);
  } else if (auto ic = s.find("complex"); ic != s.end()) {
    const int n = int(need_int(*ic, "n"));
    const ordered_json& sims = need(*ic, "simplices");
    if (!sims.is_array()) schema("'simplices' must be an array");
    std::vector<std::vector<int>> sv;
    for (const auto& x : sims) sv.push_back(x.get<std::vector<int>>());
    B.k = SimplicialComplex::from_simplices(n, sv);
    B.corpus = "custom";
  } else {
    schema("scenario needs 'corpus' or 'complex'");
  }
  B.pres = presentation_from_complex(B.k, int(int_or(s, "basepoint", 0)));
  B.fiber = fiber_from_json(need(s, "fiber"));
  const ordered_json& bj = need(s, "bundle");
  B.epsilon = num_or(bj, "epsilon", 0.0);

  bool randomized = str_or(bj, "recipe", "") == "random" || B.epsilon > 0;
  if (auto it = s.find("tasks"); it != s.end() && it->is_array())
    for (const auto& t : *it)
      if (t.is_object() && str_or(t, "check", "") == "equivalence")
        randomized = true;
  if (randomized && !s.contains("seed"))
    schema("randomized scenarios must carry a seed");
  if (s.contains("seed")) {
    const ordered_json& sj = s.at("seed");
    if (!sj.is_number_integer() || sj.get<int64_t>() < 0)
      schema("'seed' must be a non-negative integer");
    B.seed = sj.get<uint64_t>();
  }

  B.bundle = bundle_from_json(bj, B.k, B.pres, B.fiber, B.seed);
  if (auto it = s.find("datum"); it != s.end())
    B.datum = datum_from_json(*it, B.fiber, B.k.n);
  B.rep = associated_rep(B.bundle, B.pres);
  B.flat = flatness_defect(B.bundle);
  B.rel = relation_defect(B.rep, B.pres);
  return B;
}

// ------------------------------------------------------------ task running

ordered_json bound_check(const std::string& what, double measured,
                         double bound) {
  ordered_json c;
  c["what"] = what;
  c["measured"] = measured;
  c["bound"] = bound;
  c["pass"] = measured <= bound;
  return c;
}

ordered_json int_check(const std::string& what, int64_t got, int64_t want) {
  ordered_json c;
  c["what"] = what;
  c["got"] = got;
  c["want"] = want;
  c["pass"] = got == want;
  return c;
}

ordered_json flag_check(const std::string& what, bool ok) {
  ordered_json c;
  c["what"] = what;
  c["pass"] = ok;
  return c;
}

std::string anchor_of(const std::string& check) {
  static const std::map<std::string, std::string> m = {
      {"flatness", "cocycle-defect"},
      {"relations", "relator-defect"},
      {"loops", "transport-loop-bound"},
      {"projection", "projection-identities"},
      {"main-theorem", "dressed-transition-comparison"},
      {"index-agreement", "index-agreement"},
      {"chern", "chern-oracle"},
      {"rho-sharp", "spectral-pushforward-gate"},
      {"dadarlat", "pairing-equality"},
      {"pushforward", "coefficient-pushforward"},
      {"equivalence", "conjugation-invariance"}};
  auto it = m.find(check);
  if (it == m.end()) fail("InputError", "unknown task check '" + check + "'");
  return it->second;
}

ordered_json k0diff_to_json(const K0Diff& d) {
  ordered_json out;
  auto cls = [](const K0Class& c) {
    ordered_json j;
    j["rank"] = c.rank;
    j["chern"] = ordered_json::object();
    for (const auto& [name, v] : c.chern) j["chern"][name] = v;
    return j;
  };
  out["pos"] = cls(d.pos);
  out["neg"] = cls(d.neg);
  out["rank"] = d.rank();
  out["chern"] = ordered_json::object();
  for (const auto& [name, v] : d.pos.chern)
    out["chern"][name] = d.chern_on(name);
  return out;
}

const FredholmDatum& need_datum(const Built& B, const std::string& check) {
  if (!B.datum) fail("InputError", "task '" + check + "' needs a datum");
  return *B.datum;
}

// Matrix-trace index of the flattened dressed projection; constant over
// samples by construction, so jumps are reported as errors.
int64_t trace_rank(const Built& B, const FredholmDatum& d, int level, int pad,
                   const ScalarFn::Cut& cut) {
  const IndexInput route =
      p_tilde_route(B.bundle, d, pad, B.pres.basepoint, level);
  if (route.family.tolerance >= 0.25)
    fail("FlattenGate", "projection family tolerance " +
                            std::to_string(route.family.tolerance));
  ScalarFn step;
  step.f = [](double x) { return x > 0.5 ? 1.0 : 0.0; };
  step.cuts = {{cut.point, cut.gap}};
  const std::vector<int> ev = route.grading.even_indices();
  const std::vector<int> od = route.grading.odd_indices();
  bool first = true;
  int64_t rank = 0;
  double residual = 0.0;
  for (const Point& x : route.family.samples) {
    const CMatrix p = functional_calculus(route.family.value(x), step);
    cd tr(0.0, 0.0);
    for (int i : ev) tr += p.at(i, i);
    for (int i : od) tr -= p.at(i, i);
    const int64_t ri = std::llround(tr.real());
    residual = std::max(residual, std::abs(tr.real() - double(ri)));
    if (first) {
      rank = ri;
      first = false;
    } else if (ri != rank) {
      fail("RankJump", "trace index jumps between samples");
    }
  }
  if (residual > 0.01)
    fail("ClassResidual", "trace residual " + std::to_string(residual));
  return rank;
}

void task_flatness(const Built& B, const ordered_json& t, const Tol& tol,
                   ordered_json& out) {
  const FlatnessReport& fr = B.flat;
  out["epsilon"] = fr.epsilon;
  out["delta3"] = fr.delta3;
  out["unitary-defect"] = fr.unitary_defect;
  out["parity-defect"] = fr.parity_defect;
  ordered_json c = ordered_json::array();
  c.push_back(bound_check("transition-unitarity", fr.unitary_defect, tol("unitary")));
  c.push_back(bound_check("transition-parity", fr.parity_defect, tol("unitary")));
  c.push_back(bound_check("holonomy-matches-cocycle",
                          std::abs(fr.epsilon - fr.delta3), tol("exact")));
  c.push_back(bound_check("holonomy-below-twice-cocycle", fr.epsilon,
                          2.0 * fr.delta3 + tol("slack")));
  if (t.contains("budget"))
    c.push_back(bound_check("epsilon-budget", fr.epsilon,
                            num_or(t, "budget", 0.0) + tol("slack")));
  out["checks"] = std::move(c);
}

void task_relations(const Built& B, const ordered_json&, const Tol& tol,
                    ordered_json& out) {
  out["max-defect"] = B.rel.max_defect;
  out["per-relator"] = B.rel.per_relator;
  out["checks"].push_back(bound_check("relator-defect", B.rel.max_defect,
                                      3.0 * B.flat.epsilon + tol("slack")));
}

void task_loops(const Built& B, const ordered_json& t, const Tol& tol,
                ordered_json& out) {
  std::vector<std::vector<int>> loops;
  if (auto it = t.find("loops"); it != t.end()) {
    if (!it->is_array()) schema("'loops' must be an array of vertex lists");
    for (const auto& l : *it) loops.push_back(l.get<std::vector<int>>());
  } else if (!B.k.triangles.empty()) {
    const auto& tr = B.k.triangles.front();
    loops.push_back({tr[0], tr[1], tr[2], tr[0]});
  } else {
    const auto& e = B.k.edges.front();
    loops.push_back({e[0], e[1], e[0]});
  }
  const int max_steps = int(int_or(t, "max-steps", 3));
  out["loops"] = ordered_json::array();
  ordered_json c = ordered_json::array();
  for (int i = 0; i < int(loops.size()); ++i) {
    SimplicialPath path{loops[i]};
    if (!path.is_loop()) fail("InputError", "loop must close up");
    const Word w = loop_to_word(B.k, B.pres, path);
    const auto cert = search_filling(B.k, B.pres, w, max_steps);
    if (!cert)
      fail("InputError", "no filling within " + std::to_string(max_steps) +
                             " steps for loop " + std::to_string(i));
    const LoopBoundReport r = transport_loop_bound(B.bundle, B.pres, path, *cert);
    ordered_json lj;
    lj["vertices"] = loops[i];
    lj["steps"] = r.steps;
    lj["measured"] = r.measured;
    lj["bound"] = r.bound;
    out["loops"].push_back(lj);
    c.push_back(bound_check("loop-" + std::to_string(i) + "-transport",
                            r.measured, r.bound + tol("slack")));
  }
  out["checks"] = std::move(c);
}

void task_projection(const Built& B, const ordered_json& t, const Tol& tol,
                     ordered_json& out) {
  const int level = int(int_or(t, "level", 2));
  const int pad = int(int_or(t, "pad", 0));
  ordered_json c = ordered_json::array();
  ProjectionFamily mf = mishchenko_family(B.k, B.pres, B.rep, level);
  out["mishchenko-idempotency"] = mf.tolerance;
  c.push_back(bound_check("mishchenko-sa", mf.sa_defect, tol("sa")));
  c.push_back(bound_check("mishchenko-idempotency", mf.tolerance,
                          B.k.n * B.rel.max_defect + tol("slack")));
  if (B.datum) {
    const FredholmCheckReport fc = fredholm_check(B.bundle, *B.datum);
    c.push_back(bound_check("datum-odd", fc.odd_defect, tol("sa")));
    c.push_back(bound_check("datum-sa", fc.sa_defect, tol("sa")));
    c.push_back(bound_check("datum-square-corner", fc.square_corner, fc.tau));
    c.push_back(bound_check("datum-edge-corner", fc.edge_corner, fc.tau));
    const IndexInput route =
        p_tilde_route(B.bundle, *B.datum, pad, B.pres.basepoint, level);
    out["dressed-idempotency"] = route.family.tolerance;
    out["commutator-corner"] = route.dt.commutator_corner;
    c.push_back(bound_check("dressed-sa", route.family.sa_defect, tol("sa")));
    c.push_back(bound_check("dressed-idempotency", route.family.tolerance,
                            B.k.n * B.flat.delta3 + tol("slack")));
  }
  out["checks"] = std::move(c);
}

void task_main_theorem(const Built& B, const ordered_json& t, const Tol& tol,
                       ordered_json& out) {
  const FredholmDatum& d = need_datum(B, "main-theorem");
  const int level = int(int_or(t, "level", 1));
  const int pad = int(int_or(t, "pad", 0));
  const MainTheoremReport r = main_theorem_check(
      B.bundle, d, B.pres, sample_points(B.k, level), pad, tol("slack"));
  out["edge-block-max"] = r.edge_block_max;
  out["edge-block-bound"] = r.edge_block_bound;
  out["projection-max"] = r.projection_max;
  out["projection-bound"] = r.projection_bound;
  ordered_json c = ordered_json::array();
  c.push_back(bound_check("edge-blocks", r.edge_block_max, r.edge_block_bound));
  c.push_back(bound_check("projection-comparison", r.projection_max,
                          r.projection_bound));
  out["checks"] = std::move(c);
}

void task_index_agreement(const Built& B, const ordered_json& t,
                          const Tol& tol, ordered_json& out) {
  const FredholmDatum& d = need_datum(B, "index-agreement");
  if (B.fiber.d0 != B.fiber.d1)
    fail("InputError", "index agreement needs a balanced fiber");
  const int level = int(int_or(t, "level", 1));
  const int pad = int(int_or(t, "pad", 0));
  const ScalarFn::Cut cut{tol("cut"), tol("gap")};
  ChernOptions copts;
  copts.residual_tol = tol("chern-residual");

  const IndexInput route =
      p_tilde_route(B.bundle, d, pad, B.pres.basepoint, level);
  const K0Diff a = index_from_projection(route.family, route.t_sym,
                                         route.grading, B.fiber.m, cut, copts);
  const OperatorFamily famB =
      fredholm_index_family(B.bundle, d, B.pres, level, cut);
  const K0Diff b = index_family_svd(
      famB, Grading::repeat(Grading::of(B.fiber), B.k.n), B.fiber.m,
      tol("gap"), copts);
  out["dressed-route"] = k0diff_to_json(a);
  out["svd-route"] = k0diff_to_json(b);
  ordered_json c = ordered_json::array();
  c.push_back(int_check("rank-agreement", a.rank(), b.rank()));
  for (const auto& [name, chain] : B.k.cycles) {
    (void)chain;
    c.push_back(int_check("chern-agreement-" + name, a.chern_on(name),
                          b.chern_on(name)));
  }
  out["checks"] = std::move(c);
}

void task_chern(const Built& B, const ordered_json& t, const Tol& tol,
                ordered_json& out) {
  const std::string family = str_or(t, "family", "bott");
  const std::string cycle = str_or(t, "cycle", "fundamental");
  const int level = int(int_or(t, "level", 2));
  ProjectionFamily fam;
  if (family == "bott") {
    fam = bott_family(B.k, level);
  } else if (family == "constant") {
    const int dim = int(int_or(t, "dim", 2));
    const int rank = int(int_or(t, "rank", 1));
    if (rank < 0 || rank > dim) schema("constant family rank out of range");
    CMatrix p(dim, dim);
    for (int i = 0; i < rank; ++i) p.at(i, i) = cd(1.0, 0.0);
    fam = constant_family(B.k, p, level);
  } else {
    schema("unknown chern family '" + family + "'");
  }
  ChernOptions copts;
  copts.residual_tol = tol("chern-residual");
  const ChernResult r = chern_number(fam, cycle, copts);
  out["value"] = r.value;
  out["residual"] = r.residual;
  out["refinement-level"] = r.level;
  ordered_json c = ordered_json::array();
  c.push_back(bound_check("family-idempotency", fam.tolerance, tol("exact")));
  c.push_back(bound_check("lattice-residual", r.residual, tol("chern-residual")));
  if (t.contains("expect"))
    c.push_back(int_check("chern-value", r.value, need_int(t, "expect")));
  out["checks"] = std::move(c);
}

void task_rho_sharp(const Built& B, const ordered_json& t, const Tol& tol,
                    ordered_json& out) {
  const GroupAlgebraElement a =
      element_from_json(need(t, "element"), B.pres.n_generators());
  const ScalarFn::Cut cut{tol("cut"), tol("gap")};
  const RhoSharpResult r = rho_sharp(B.rep, a, cut);
  out["gate"] = r.gate;
  out["idempotency"] = r.idempotency;
  ordered_json c = ordered_json::array();
  c.push_back(bound_check("quarter-gate", r.gate, tol("gate")));
  c.push_back(bound_check("flattened-idempotency", r.idempotency, tol("idem")));
  if (t.contains("expect-rank")) {
    const double tr = r.projection.trace().real() / double(B.fiber.m);
    const int64_t rank = std::llround(tr);
    out["rank-residual"] = std::abs(tr - double(rank));
    c.push_back(int_check("rank", rank, need_int(t, "expect-rank")));
    c.push_back(bound_check("rank-residual", std::abs(tr - double(rank)),
                            tol("chern-residual")));
  }
  out["checks"] = std::move(c);
}

void task_dadarlat(const Built& B, const ordered_json& t, const Tol& tol,
                   ordered_json& out) {
  const FredholmDatum& d = need_datum(B, "dadarlat");
  const std::string ek = str_or(t, "eta", "point");
  KHomologyClass eta;
  if (ek == "point") {
    eta.kind = KHomologyClass::Kind::Point;
  } else if (ek == "fundamental") {
    eta.kind = KHomologyClass::Kind::Fundamental;
    eta.cycle = str_or(t, "cycle", "fundamental");
  } else {
    schema("unknown eta kind '" + ek + "'");
  }
  const GroupAlgebraElement p =
      element_from_json(need(t, "p"), B.pres.n_generators());
  GroupAlgebraElement q;
  q.k = p.k;
  if (t.contains("q")) q = element_from_json(t.at("q"), B.pres.n_generators());
  const int pad = int(int_or(t, "pad", 0));
  const ScalarFn::Cut cut{tol("cut"), tol("gap")};
  const DadarlatReport r = dadarlat_check(B.bundle, d, B.pres, eta, p, q, pad, cut);
  out["lhs"] = r.lhs;
  out["rhs"] = r.rhs;
  out["rhs-p"] = r.rhs_p;
  out["rhs-q"] = r.rhs_q;
  out["gate-p"] = r.gate_p;
  out["gate-q"] = r.gate_q;
  ordered_json c = ordered_json::array();
  c.push_back(int_check("pairing", r.lhs, r.rhs));
  if (t.contains("expect"))
    c.push_back(int_check("expected-value", r.lhs, need_int(t, "expect")));
  out["checks"] = std::move(c);
}

void task_pushforward(const Built& B, const ordered_json& t, const Tol& tol,
                      ordered_json& out) {
  const FredholmDatum& d = need_datum(B, "pushforward");
  std::vector<int> factors = {1, 2, 3};
  if (auto it = t.find("factors"); it != t.end())
    factors = it->get<std::vector<int>>();
  const bool with_rank = bool_or(t, "rank", B.epsilon == 0.0);
  const int level = int(int_or(t, "level", 1));
  const ScalarFn::Cut cut{tol("cut"), tol("gap")};
  ordered_json c = ordered_json::array();
  int64_t src_rank = 0;
  if (with_rank) {
    src_rank = trace_rank(B, d, level, 0, cut);
    out["source-rank"] = src_rank;
  }
  out["factors"] = ordered_json::array();
  for (int r : factors) {
    if (r < 1) schema("pushforward factors must be positive");
    const BlockEmbedding f{r, r * B.fiber.m};
    const AlmostFlatBundle pb = pushforward_bundle(B.bundle, f);
    const FredholmDatum pd = pushforward_datum(d, B.fiber, f);
    const FlatnessReport pf = flatness_defect(pb);
    ordered_json fj;
    fj["r"] = r;
    fj["epsilon"] = pf.epsilon;
    c.push_back(bound_check("epsilon-preserved-x" + std::to_string(r),
                            std::abs(pf.epsilon - B.flat.epsilon),
                            tol("unitary")));
    const FredholmCheckReport fc = fredholm_check(pb, pd);
    c.push_back(flag_check("datum-valid-x" + std::to_string(r), fc.pass));
    if (with_rank) {
      Built pB = B;
      pB.bundle = pb;
      pB.fiber = GradedSpace{B.fiber.d0, B.fiber.d1, r * B.fiber.m};
      pB.flat = pf;
      const int64_t pr = trace_rank(pB, pd, level, 0, cut);
      fj["trace-rank"] = pr;
      c.push_back(int_check("rank-x" + std::to_string(r), pr, r * src_rank));
    }
    out["factors"].push_back(fj);
  }
  out["checks"] = std::move(c);
}

void task_equivalence(const Built& B, const ordered_json& t, const Tol& tol,
                      ordered_json& out) {
  std::vector<Word> words;
  if (auto it = t.find("words"); it != t.end()) {
    if (!it->is_array()) schema("'words' must be an array of words");
    for (const auto& wj : *it)
      words.push_back(word_from_json(wj, B.pres.n_generators()));
  } else {
    for (int g = 1; g <= std::min(B.pres.n_generators(), 4); ++g)
      words.push_back(Word{g});
  }
  if (words.empty()) fail("InputError", "equivalence needs at least one word");
  Rng rng(B.seed ^ 0x45515549u);
  const CMatrix s = haar_even_unitary(rng, B.fiber);
  AlmostRepresentation rep2;
  rep2.fiber = B.fiber;
  for (const CMatrix& u : B.rep.images)
    rep2.images.push_back(s * u * s.adjoint());
  const CMatrix id = CMatrix::identity(B.fiber.dim());
  const double conj = equivalence_distance(B.rep, s, rep2, id, words);
  const double raw = equivalence_distance(B.rep, id, rep2, id, words);
  out["conjugated-distance"] = conj;
  out["raw-distance"] = raw;
  out["checks"].push_back(bound_check("conjugation-invariance", conj, tol("exact")));
}

ordered_json run_one_task(const Built& B, const ordered_json& t,
                          const Tol& tol) {
  ordered_json out;
  std::string check;
  try {
    if (!t.is_object()) schema("each task must be an object");
    check = need_str(t, "check");
    out["name"] = str_or(t, "name", check);
    out["check"] = check;
    out["anchor"] = anchor_of(check);
    out["checks"] = ordered_json::array();
    if (check == "flatness") task_flatness(B, t, tol, out);
    else if (check == "relations") task_relations(B, t, tol, out);
    else if (check == "loops") task_loops(B, t, tol, out);
    else if (check == "projection") task_projection(B, t, tol, out);
    else if (check == "main-theorem") task_main_theorem(B, t, tol, out);
    else if (check == "index-agreement") task_index_agreement(B, t, tol, out);
    else if (check == "chern") task_chern(B, t, tol, out);
    else if (check == "rho-sharp") task_rho_sharp(B, t, tol, out);
    else if (check == "dadarlat") task_dadarlat(B, t, tol, out);
    else if (check == "pushforward") task_pushforward(B, t, tol, out);
    else if (check == "equivalence") task_equivalence(B, t, tol, out);
    else fail("InputError", "unknown task check '" + check + "'");
    bool pass = true;
    for (const auto& cj : out["checks"])
      if (!cj.at("pass").get<bool>()) pass = false;
    out["pass"] = pass;
  } catch (const AfbError& e) {
    out["error"] = {{"kind", e.kind}, {"message", e.what()}};
    out["pass"] = false;
  } catch (const nlohmann::json::exception& e) {
    out["error"] = {{"kind", "SchemaError"}, {"message", e.what()}};
    out["pass"] = false;
  }
  return out;
}

} // namespace

// ------------------------------------------------------------- public API

SimplicialComplex corpus_complex(const std::string& name) {
  if (name == "circle") return make_circle();
  if (name == "triangle") return make_triangle();
  if (name == "wedge") return make_wedge();
  if (name == "sphere") return make_sphere();
  if (name == "torus") return make_torus();
  if (name == "rp2") return make_rp2();
  fail("InputError", "unknown corpus complex '" + name + "'");
}

ProjectionFamily bott_family(const SimplicialComplex& k, int level) {
  if (k.tri_chart.empty())
    fail("InputError", "the bott family needs a complex with charts");
  ProjectionFamily fam;
  fam.complex = k;
  fam.samples = sample_points(k, level);
  const SimplicialComplex kc = k;
  fam.value = [kc](const Point& x) {
    const std::array<double, 2> th = chart_coords(kc, x);
    double h1 = std::sin(2.0 * kPi * th[0]);
    double h2 = std::sin(2.0 * kPi * th[1]);
    double h3 = std::cos(2.0 * kPi * th[0]) + std::cos(2.0 * kPi * th[1]) - 1.0;
    const double r = std::sqrt(h1 * h1 + h2 * h2 + h3 * h3);
    h1 /= r;
    h2 /= r;
    h3 /= r;
    CMatrix p(2, 2);
    p.at(0, 0) = cd(0.5 * (1.0 + h3), 0.0);
    p.at(0, 1) = cd(0.5 * h1, -0.5 * h2);
    p.at(1, 0) = cd(0.5 * h1, 0.5 * h2);
    p.at(1, 1) = cd(0.5 * (1.0 - h3), 0.0);
    return p;
  };
  measure_family(fam);
  return fam;
}

ProjectionFamily constant_family(const SimplicialComplex& k, const CMatrix& p,
                                 int level) {
  ProjectionFamily fam;
  fam.complex = k;
  fam.samples = sample_points(k, level);
  const CMatrix pc = p;
  fam.value = [pc](const Point&) { return pc; };
  measure_family(fam);
  return fam;
}

ordered_json matrix_to_json(const CMatrix& a) {
  ordered_json j;
  j["rows"] = a.rows();
  j["cols"] = a.cols();
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < a.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < a.cols(); ++c)
      row.push_back({a.at(i, c).real(), a.at(i, c).imag()});
    rows.push_back(row);
  }
  j["data"] = rows;
  return j;
}

CMatrix matrix_from_json(const ordered_json& j) {
  if (!j.is_object()) schema("a matrix must be an object");
  const int rows = int(need_int(j, "rows"));
  const int cols = int(need_int(j, "cols"));
  if (rows < 0 || cols < 0) schema("matrix dimensions must be non-negative");
  const ordered_json& data = need(j, "data");
  if (!data.is_array() || int(data.size()) != rows)
    schema("matrix 'data' must hold one row per matrix row");
  CMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const ordered_json& row = data[i];
    if (!row.is_array() || int(row.size()) != cols)
      schema("matrix row has the wrong length");
    for (int c = 0; c < cols; ++c) {
      const ordered_json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        schema("matrix entries must be [re, im] pairs");
      a.at(i, c) = cd(e[0].get<double>(), e[1].get<double>());
    }
  }
  return a;
}

ordered_json run_scenario(const ordered_json& scenario,
                          const RunOptions& opts) {
  try {
    const Built B = build_scenario(scenario);
    const Tol tol = make_tol(scenario, opts);
    const ordered_json& tasks = need(scenario, "tasks");
    if (!tasks.is_array()) schema("'tasks' must be an array");

    ordered_json report;
    report["version"] = kVersion;
    report["name"] = B.name;
    report["corpus"] = B.corpus;
    report["seed"] = B.seed;
    report["epsilon"] = B.epsilon;
    report["fiber"] = {{"d0", B.fiber.d0}, {"d1", B.fiber.d1}, {"m", B.fiber.m}};
    report["flatness"] = {{"epsilon", B.flat.epsilon}, {"delta3", B.flat.delta3}};
    report["tasks"] = ordered_json::array();

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ordered_json> results(tasks.size());
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
      for (size_t i = 0; i < tasks.size(); ++i) {
        const auto s = std::chrono::steady_clock::now();
        results[i] = run_one_task(B, tasks[i], tol);
        if (opts.timings)
          results[i]["ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - s)
                                 .count();
      }
    } else {
      for (size_t base = 0; base < tasks.size(); base += size_t(jobs)) {
        std::vector<std::future<ordered_json>> wave;
        const size_t end = std::min(tasks.size(), base + size_t(jobs));
        for (size_t i = base; i < end; ++i)
          wave.push_back(std::async(std::launch::async,
                                    [&B, &tasks, &tol, i] {
                                      return run_one_task(B, tasks[i], tol);
                                    }));
        for (size_t i = base; i < end; ++i) results[i] = wave[i - base].get();
      }
    }
    bool pass = true;
    for (auto& r : results) {
      if (!r.at("pass").get<bool>()) pass = false;
      report["tasks"].push_back(std::move(r));
    }
    if (opts.timings)
      report["total-ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    report["verdict"] = pass ? "pass" : "fail";
    return report;
  } catch (const nlohmann::json::exception& e) {
    fail("SchemaError", e.what());
  }
}

ordered_json run_sweep(const ordered_json& scenario,
                       const std::string& param_path, double lo, double hi,
                       const std::string& target, int steps,
                       const RunOptions& opts) {
  if (!(lo < hi)) fail("InputError", "sweep needs lo < hi");
  if (steps < 1) fail("InputError", "sweep needs at least one step");

  ordered_json base = scenario;
  ordered_json kept = ordered_json::array();
  if (auto it = scenario.find("tasks"); it != scenario.end() && it->is_array())
    for (const auto& t : *it)
      if (t.is_object() &&
          (str_or(t, "name", str_or(t, "check", "")) == target ||
           str_or(t, "check", "") == target))
        kept.push_back(t);
  if (kept.empty())
    fail("InputError", "no task matches sweep target '" + target + "'");
  base["tasks"] = kept;

  ordered_json::json_pointer ptr;
  try {
    ptr = ordered_json::json_pointer(param_path);
  } catch (const nlohmann::json::exception&) {
    fail("InputError", "bad parameter path '" + param_path + "'");
  }
  if (!base.contains(ptr))
    fail("InputError", "scenario has no parameter at '" + param_path + "'");

  ordered_json out;
  out["version"] = kVersion;
  out["name"] = str_or(scenario, "name", "scenario") + "-sweep";
  out["param"] = param_path;
  out["target"] = target;
  out["lo"] = lo;
  out["hi"] = hi;
  out["steps"] = steps;
  out["observations"] = ordered_json::array();

  auto eval = [&](double v) {
    ordered_json s2 = base;
    s2[ptr] = v;
    const ordered_json rep = run_scenario(s2, opts);
    const bool ok = rep.at("verdict").get<std::string>() == "pass";
    out["observations"].push_back({{"value", v}, {"pass", ok}});
    return ok;
  };

  const bool plo = eval(lo);
  const bool phi = eval(hi);
  if (!plo || phi) {
    out["bracketed"] = false;
    out["estimate"] = nullptr;
    out["verdict"] = "fail";
    return out;
  }
  double a = lo, b = hi;
  for (int i = 0; i < steps; ++i) {
    const double mid = a > 0 ? std::sqrt(a * b) : 0.5 * (a + b);
    if (!(mid > a && mid < b)) break;
    (eval(mid) ? a : b) = mid;
  }
  out["bracketed"] = true;
  out["estimate"] = {{"pass-max", a}, {"fail-min", b}};
  out["verdict"] = "pass";
  return out;
}

namespace {

void diff_rec(const ordered_json& a, const ordered_json& b,
              const std::string& path, std::vector<std::string>& out) {
  auto timing_key = [](const std::string& k) {
    return k == "ms" || k == "total-ms";
  };
  if (a.is_object() && b.is_object()) {
    std::vector<std::string> keys;
    for (auto it = a.begin(); it != a.end(); ++it) keys.push_back(it.key());
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key())) keys.push_back(it.key());
    for (const std::string& k : keys) {
      if (timing_key(k)) continue;
      const std::string p = path + "/" + k;
      if (!a.contains(k)) {
        out.push_back(p + ": only in second");
      } else if (!b.contains(k)) {
        out.push_back(p + ": only in first");
      } else {
        diff_rec(a.at(k), b.at(k), p, out);
      }
    }
    return;
  }
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size()) {
      out.push_back(path + ": array sizes " + std::to_string(a.size()) +
                    " != " + std::to_string(b.size()));
      return;
    }
    for (size_t i = 0; i < a.size(); ++i)
      diff_rec(a[i], b[i], path + "/" + std::to_string(i), out);
    return;
  }
  if (a != b) out.push_back(path + ": " + a.dump() + " != " + b.dump());
}

} // namespace

bool report_diff(const ordered_json& a, const ordered_json& b,
                 std::ostream& out) {
  std::vector<std::string> diffs;
  diff_rec(a, b, "", diffs);
  for (const std::string& d : diffs) out << d << "\n";
  return diffs.empty();
}

std::string render_text(const ordered_json& report) {
  std::ostringstream o;
  o.setf(std::ios::fmtflags(0), std::ios::floatfield);
  o.precision(6);
  o << report.value("name", std::string("report")) << "  ["
    << report.value("verdict", std::string("?")) << "]\n";
  if (report.contains("tasks")) {
    for (const auto& t : report.at("tasks")) {
      o << "  [" << (t.value("pass", false) ? " ok " : "FAIL") << "] "
        << t.value("name", std::string("?")) << "  ("
        << t.value("anchor", std::string("?")) << ")\n";
      if (t.contains("error"))
        o << "         error " << t.at("error").value("kind", std::string("?"))
          << ": " << t.at("error").value("message", std::string("")) << "\n";
      if (!t.contains("checks")) continue;
      for (const auto& c : t.at("checks")) {
        o << "         " << (c.value("pass", false) ? "ok   " : "FAIL ")
          << c.value("what", std::string("?"));
        if (c.contains("measured"))
          o << ": " << c.at("measured").get<double>()
            << " <= " << c.at("bound").get<double>();
        else if (c.contains("got"))
          o << ": " << c.at("got").get<int64_t>() << " == "
            << c.at("want").get<int64_t>();
        o << "\n";
      }
    }
  }
  if (report.contains("observations")) {
    for (const auto& ob : report.at("observations"))
      o << "  value " << ob.at("value").get<double>() << " -> "
        << (ob.at("pass").get<bool>() ? "pass" : "fail") << "\n";
    if (report.contains("estimate") && !report.at("estimate").is_null())
      o << "  threshold in (" << report.at("estimate").at("pass-max").get<double>()
        << ", " << report.at("estimate").at("fail-min").get<double>() << "]\n";
    else if (report.contains("bracketed"))
      o << "  threshold not bracketed\n";
  }
  return o.str();
}

// ------------------------------------------------------------- generation

namespace {

std::string eps_tag(double eps) {
  std::ostringstream o;
  o << eps;
  std::string s = o.str();
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

ordered_json element_json(const std::string& kind, int letter = 0) {
  ordered_json j;
  j["kind"] = kind;
  if (kind == "average") j["letter"] = letter;
  return j;
}

} // namespace

ordered_json generate_scenario(
    const std::string& corpus, const std::map<std::string, std::string>& params) {
  static const std::set<std::string> known = {"epsilon", "seed",  "fiber",
                                              "datum",   "rep",   "level",
                                              "profile"};
  for (const auto& [key, val] : params) {
    (void)val;
    if (!known.count(key))
      fail("InputError", "unknown generation parameter '" + key + "'");
  }
  auto pv = [&params](const std::string& key, const std::string& d) {
    auto it = params.find(key);
    return it == params.end() ? d : it->second;
  };

  struct Defaults {
    std::string fiber, datum, rep;
  };
  static const std::map<std::string, Defaults> defs = {
      {"circle", {"1,1,2", "symmetry", "random"}},
      {"triangle", {"2,1,1", "zero", "trivial"}},
      {"wedge", {"1,1,1", "none", "random"}},
      {"sphere", {"2,2,1", "kernel", "random"}},
      {"torus", {"1,1,1", "symmetry", "random"}},
      {"rp2", {"2,1,1", "zero", "trivial"}}};
  auto dit = defs.find(corpus);
  if (dit == defs.end())
    fail("InputError", "unknown corpus '" + corpus + "'");

  const std::string profile = pv("profile", "full");
  const std::string rep = pv("rep", dit->second.rep);
  double epsilon = 0.0;
  uint64_t seed = 1;
  int level = 2;
  try {
    epsilon = std::stod(pv("epsilon", "0"));
    seed = std::stoull(pv("seed", "1"));
    level = std::stoi(pv("level", "2"));
  } catch (const std::exception&) {
    fail("InputError", "malformed numeric generation parameter");
  }
  if (epsilon < 0 || level < 1 || level > 3)
    fail("InputError", "generation parameter out of range");

  std::string fiber_s = pv("fiber", dit->second.fiber);
  if (corpus == "rp2" && rep == "sign" && !params.count("fiber"))
    fiber_s = "1,1,1";
  GradedSpace w;
  {
    std::istringstream is(fiber_s);
    char c1 = 0, c2 = 0;
    if (!(is >> w.d0 >> c1 >> w.d1 >> c2 >> w.m) || c1 != ',' || c2 != ',')
      fail("InputError", "fiber must be 'd0,d1,m'");
  }
  std::string datum = pv("datum", dit->second.datum);
  if (rep == "sign" && !params.count("datum") && w.d0 != w.d1) datum = "zero";

  const SimplicialComplex k = corpus_complex(corpus);
  const Presentation pres = presentation_from_complex(k, 0);
  // heavier index machinery only runs where the idempotency defect clears
  // the quarter gate with room to spare
  const bool exact_ok = epsilon * k.n < 0.2;

  ordered_json s;
  s["version"] = kVersion;
  if (profile == "gate-sweep") {
    if (corpus != "triangle")
      fail("InputError", "the gate-sweep profile is defined on the triangle");
    s["name"] = "triangle-gate-sweep";
    s["corpus"] = "triangle";
    s["seed"] = seed;
    s["fiber"] = {{"d0", 1}, {"d1", 1}, {"m", 1}};
    s["bundle"] = {{"recipe", "trivial"},
                   {"epsilon", epsilon > 0 ? epsilon : 0.5}};
    ordered_json t;
    t["check"] = "rho-sharp";
    t["element"] = element_json("average", 1);
    t["expect-rank"] = 2;
    s["tasks"] = ordered_json::array({t});
    return s;
  }
  if (profile != "full")
    fail("InputError", "unknown profile '" + profile + "'");

  std::string name = corpus + "-" + rep + "-e" + eps_tag(epsilon);
  s["name"] = name;
  s["corpus"] = corpus;
  s["seed"] = seed;
  s["fiber"] = {{"d0", w.d0}, {"d1", w.d1}, {"m", w.m}};

  ordered_json bj;
  bj["recipe"] = rep == "random" ? "random" : rep;
  bj["epsilon"] = epsilon;
  if (rep == "random" && (datum == "symmetry" || datum == "kernel"))
    bj["symmetric"] = true;
  if (rep == "random" && datum == "kernel") {
    const int r = 1;
    bj["even-subblocks"] = {r, w.d0 - r};
  }
  s["bundle"] = bj;

  if (datum != "none") {
    ordered_json dj;
    dj["kind"] = datum;
    if (datum == "kernel") {
      dj["rank"] = 1;
      if (epsilon == 0.0)
        dj["ideal"] = {{"c0", 1}, {"c1", 1}};
    }
    s["datum"] = dj;
  }

  ordered_json tasks = ordered_json::array();
  {
    ordered_json t;
    t["check"] = "flatness";
    t["budget"] = epsilon;
    tasks.push_back(t);
  }
  tasks.push_back({{"check", "relations"}});
  if (!k.triangles.empty()) {
    ordered_json t;
    t["check"] = "loops";
    const auto& tr0 = k.triangles.front();
    ordered_json loops = ordered_json::array();
    loops.push_back({tr0[0], tr0[1], tr0[2], tr0[0]});
    if (k.triangles.size() > 1) {
      const auto& tr1 = k.triangles.back();
      loops.push_back({tr1[0], tr1[1], tr1[2], tr1[0]});
    }
    t["loops"] = loops;
    t["max-steps"] = 3;
    tasks.push_back(t);
  }
  if (datum != "none") {
    ordered_json t;
    t["check"] = "projection";
    t["level"] = level;
    tasks.push_back(t);
    tasks.push_back({{"check", "main-theorem"}, {"level", 1}});
  }
  if (datum != "none" && w.d0 == w.d1 && exact_ok)
    tasks.push_back({{"check", "index-agreement"}, {"level", 1}});
  if (corpus == "torus") {
    ordered_json tb;
    tb["name"] = "chern-bott";
    tb["check"] = "chern";
    tb["family"] = "bott";
    tb["cycle"] = "fundamental";
    tb["expect"] = -1;
    tasks.push_back(tb);
    ordered_json tc;
    tc["name"] = "chern-flat";
    tc["check"] = "chern";
    tc["family"] = "constant";
    tc["cycle"] = "fundamental";
    tc["expect"] = 0;
    tasks.push_back(tc);
  }
  {
    ordered_json t;
    t["check"] = "rho-sharp";
    if (corpus == "rp2") {
      const std::vector<int> sig = mod2_character(pres);
      int letter = 1;
      for (int g = 0; g < int(sig.size()); ++g)
        if (sig[g] < 0) { letter = g + 1; break; }
      t["element"] = element_json("average", letter);
      t["expect-rank"] = rep == "sign" ? 0 : w.d0 + w.d1;
    } else {
      t["element"] = element_json("unit");
      t["expect-rank"] = w.d0 + w.d1;
    }
    tasks.push_back(t);
  }
  if (datum != "none" && exact_ok && epsilon == 0.0) {
    if (corpus == "triangle" || corpus == "rp2") {
      ordered_json t;
      t["check"] = "dadarlat";
      t["eta"] = "point";
      if (corpus == "rp2") {
        const std::vector<int> sig = mod2_character(pres);
        int letter = 1;
        for (int g = 0; g < int(sig.size()); ++g)
          if (sig[g] < 0) { letter = g + 1; break; }
        t["p"] = element_json("average", letter);
        t["expect"] = rep == "sign" ? 0 : w.d0 - w.d1;
      } else {
        t["p"] = element_json("unit");
        t["expect"] = w.d0 - w.d1;
      }
      t["q"] = element_json("zero");
      tasks.push_back(t);
    } else if (corpus == "torus") {
      ordered_json t;
      t["check"] = "dadarlat";
      t["eta"] = "fundamental";
      t["cycle"] = "fundamental";
      t["p"] = element_json("unit");
      t["q"] = element_json("zero");
      t["expect"] = 0;
      tasks.push_back(t);
    }
  }
  if (datum != "none") {
    ordered_json t;
    t["check"] = "pushforward";
    t["factors"] = {1, 2, 3};
    t["rank"] = exact_ok;
    t["level"] = 1;
    tasks.push_back(t);
  }
  {
    ordered_json t;
    t["check"] = "equivalence";
    if (corpus == "wedge") {
      t["words"] = ordered_json::array({{1}, {2}, {1, 2}, {1, -2}, {2, -1}});
    }
    tasks.push_back(t);
  }
  s["tasks"] = tasks;
  return s;
}

} // namespace afb
