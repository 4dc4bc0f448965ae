#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "afb/scenario.hpp"
#include "afb/simplicial.hpp"
#include "afb/snf.hpp"

using namespace afb;

namespace {

int64_t int_det(IntMat a) {
  // fraction-free Gaussian elimination (Bareiss); unimodular inputs only here
  const int n = a.rows;
  int64_t prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a.at(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
    prev = a.at(k, k);
  }
  return sign * a.at(n - 1, n - 1);
}

IntMat mul(const IntMat& a, const IntMat& b) {
  IntMat c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k)
      if (a.at(i, k) != 0)
        for (int j = 0; j < b.cols; ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
  return c;
}

std::vector<double> full_bary(const SimplicialComplex& k, const Point& p) {
  return barycentric_coords(k, p);
}

std::vector<int64_t> quantize(const std::vector<double>& b) {
  std::vector<int64_t> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    out[i] = llround(b[i] * 720720.0);
  return out;
}

} // namespace

TEST_CASE("smith normal form on hand and random matrices") {
  // diag(2,6) gcd structure: [[2,0],[0,6]] stays, [[2,4],[4,2]] -> (2, 6)
  IntMat a(2, 2);
  a.at(0, 0) = 2; a.at(0, 1) = 4;
  a.at(1, 0) = 4; a.at(1, 1) = 2;
  const SmithResult r = smith_normal_form(a);
  CHECK(r.diag == std::vector<int64_t>{2, 6});

  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 1 + int(rng.next_below(5)), n = 1 + int(rng.next_below(5));
    IntMat x(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        x.at(i, j) = int64_t(rng.next_below(11)) - 5;
    const SmithResult s = smith_normal_form(x);
    CHECK(std::abs(int_det(s.u)) == 1);
    CHECK(std::abs(int_det(s.v)) == 1);
    const IntMat d = mul(mul(s.u, x), s.v);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        const int64_t want = (i == j && i < int(s.diag.size())) ? s.diag[i] : 0;
        CHECK(d.at(i, j) == want);
      }
    for (int i = 0; i + 1 < int(s.diag.size()); ++i)
      if (s.diag[i + 1] != 0)
        CHECK((s.diag[i] != 0 && s.diag[i + 1] % s.diag[i] == 0));
  }
}

TEST_CASE("corpus homology matches the classical table") {
  struct Row {
    const char* name;
    std::vector<int64_t> torsion;
    int free_rank;
  };
  const std::vector<Row> table = {
      {"circle", {}, 1},  {"triangle", {}, 0}, {"wedge", {}, 2},
      {"sphere", {}, 0},  {"torus", {}, 2},    {"rp2", {2}, 0},
  };
  for (const Row& row : table) {
    const SimplicialComplex k = corpus_complex(row.name);
    const Presentation pres = presentation_from_complex(k);
    const H1Coords h1 = h1_of_presentation(pres);
    CAPTURE(row.name);
    CHECK(h1.moduli == row.torsion);
    CHECK(h1.free_rank == row.free_rank);
  }
}

TEST_CASE("torus complex combinatorics") {
  const SimplicialComplex k = corpus_complex("torus");
  CHECK(k.n == 7);
  CHECK(int(k.edges.size()) == 21);
  CHECK(int(k.triangles.size()) == 14);
  CHECK(k.n - int(k.edges.size()) + int(k.triangles.size()) == 0);  // Euler

  // closed surface: every edge lies in exactly two triangles
  std::map<int, int> edge_use;
  for (const auto& t : k.triangles) {
    edge_use[k.edge_index(t[0], t[1])]++;
    edge_use[k.edge_index(t[0], t[2])]++;
    edge_use[k.edge_index(t[1], t[2])]++;
  }
  CHECK(int(edge_use.size()) == 21);
  for (const auto& [e, c] : edge_use) {
    CAPTURE(e);
    CHECK(c == 2);
  }

  // the fundamental cycle is a 2-cycle: signed boundary cancels on each edge
  const auto it = k.cycles.find("fundamental");
  REQUIRE(it != k.cycles.end());
  CHECK(int(it->second.size()) == 14);
  std::map<std::pair<int, int>, int> boundary;
  for (const auto& [ti, sign] : it->second) {
    const auto& t = k.triangles[ti];
    // ascending-vertex orientation: faces (1,2), (0,2) reversed, (0,1)
    boundary[{t[1], t[2]}] += sign;
    boundary[{t[0], t[2]}] -= sign;
    boundary[{t[0], t[1]}] += sign;
  }
  for (const auto& [e, c] : boundary) {
    CAPTURE(e.first);
    CHECK(c == 0);
  }

  // reversed cycle present with opposite signs
  const auto rev = k.cycles.find("fundamental-rev");
  REQUIRE(rev != k.cycles.end());
  std::map<int, int> fwd_sign;
  for (const auto& [ti, s] : it->second) fwd_sign[ti] = s;
  for (const auto& [ti, s] : rev->second) CHECK(s == -fwd_sign[ti]);
}

TEST_CASE("torus charts agree across shared edges modulo the lattice") {
  const SimplicialComplex k = corpus_complex("torus");
  REQUIRE(int(k.tri_chart.size()) == int(k.triangles.size()));
  for (std::size_t a = 0; a < k.triangles.size(); ++a) {
    for (std::size_t b = a + 1; b < k.triangles.size(); ++b) {
      std::vector<int> shared;
      for (int v : k.triangles[a])
        for (int w : k.triangles[b])
          if (v == w) shared.push_back(v);
      if (shared.size() != 2) continue;
      // chart difference of the two shared vertices must match exactly, so
      // the affine charts differ by a pure lattice translation on the edge
      std::array<double, 2> da{}, db{};
      for (int s = 0; s < 2; ++s) {
        for (int c = 0; c < 3; ++c) {
          if (k.triangles[a][c] == shared[s])
            for (int d = 0; d < 2; ++d)
              da[d] += (s ? 1.0 : -1.0) * k.tri_chart[a][c][d];
          if (k.triangles[b][c] == shared[s])
            for (int d = 0; d < 2; ++d)
              db[d] += (s ? 1.0 : -1.0) * k.tri_chart[b][c][d];
        }
      }
      CAPTURE(a); CAPTURE(b);
      CHECK(std::abs(da[0] - db[0]) < 1e-12);
      CHECK(std::abs(da[1] - db[1]) < 1e-12);
      // and the offset itself is integral
      for (int s = 0; s < 2; ++s) {
        std::array<double, 2> ca{}, cb{};
        for (int c = 0; c < 3; ++c) {
          if (k.triangles[a][c] == shared[s]) ca = k.tri_chart[a][c];
          if (k.triangles[b][c] == shared[s]) cb = k.tri_chart[b][c];
        }
        for (int d = 0; d < 2; ++d) {
          const double off = ca[d] - cb[d];
          CHECK(std::abs(off - llround(off)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("rp2 complex combinatorics") {
  const SimplicialComplex k = corpus_complex("rp2");
  CHECK(k.n == 6);
  CHECK(int(k.edges.size()) == 15);
  CHECK(int(k.triangles.size()) == 10);
  CHECK(k.n - int(k.edges.size()) + int(k.triangles.size()) == 1);  // Euler
  std::map<int, int> edge_use;
  for (const auto& t : k.triangles) {
    edge_use[k.edge_index(t[0], t[1])]++;
    edge_use[k.edge_index(t[0], t[2])]++;
    edge_use[k.edge_index(t[1], t[2])]++;
  }
  for (const auto& [e, c] : edge_use) {
    CAPTURE(e);
    CHECK(c == 2);
  }
}

TEST_CASE("sphere fundamental cycle is the tetrahedron boundary") {
  const SimplicialComplex k = corpus_complex("sphere");
  const auto it = k.cycles.find("fundamental");
  REQUIRE(it != k.cycles.end());
  std::map<std::pair<int, int>, int> boundary;
  for (const auto& [ti, sign] : it->second) {
    const auto& t = k.triangles[ti];
    boundary[{t[1], t[2]}] += sign;
    boundary[{t[0], t[2]}] -= sign;
    boundary[{t[0], t[1]}] += sign;
  }
  for (const auto& [e, c] : boundary) CHECK(c == 0);
}

TEST_CASE("sample points deduplicate across faces") {
  const SimplicialComplex k = corpus_complex("triangle");
  const std::vector<Point> s1 = sample_points(k, 1);
  // one triangle: 3 vertices + 3 edge midpoints + centroid
  CHECK(int(s1.size()) == 7);
  std::set<std::vector<int64_t>> seen;
  for (const Point& p : s1) {
    CHECK(int(p.bary.size()) == p.dim + 1);
    double sum = 0.0;
    for (double b : p.bary) {
      CHECK(b > 0.0);
      sum += b;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(seen.insert(quantize(full_bary(k, p))).second);
  }

  const std::vector<Point> s2 = sample_points(k, 2);
  CHECK(int(s2.size()) == 25);  // second barycentric subdivision vertices
  std::set<std::vector<int64_t>> seen2;
  for (const Point& p : s2) CHECK(seen2.insert(quantize(full_bary(k, p))).second);

  // vertices of the first subdivision survive into the second
  for (const Point& p : s1) CHECK(seen2.count(quantize(full_bary(k, p))) == 1);
}

TEST_CASE("make_point drops near-zero weights to the spanned face") {
  const SimplicialComplex k = corpus_complex("triangle");
  const Point p = make_point(k, {0, 1, 2}, {0.5, 0.5, 1e-15});
  CHECK(p.dim == 1);
  CHECK(int(p.bary.size()) == 2);
  const Point v = make_point(k, {0, 1, 2}, {0.0, 1.0, 0.0});
  CHECK(v.dim == 0);
  CHECK(open_star_membership(k, v, 1));
  CHECK(!open_star_membership(k, v, 0));
  const Point c = make_point(k, {0, 1, 2}, {0.2, 0.3, 0.5});
  CHECK(open_star_membership(k, c, 0));
  CHECK(open_star_membership(k, c, 2));
}

TEST_CASE("word reduction and inversion") {
  CHECK(reduce_word({1, -1}) == Word{});
  CHECK(reduce_word({1, 2, -2, -1, 3}) == Word{3});
  CHECK(reduce_word({1, 2, -2, 2}) == Word{1, 2});
  CHECK(inverse_word({1, 2}) == Word{-2, -1});
  CHECK(concat_words({1, 2}, {-2, 3}) == Word{1, 2, -2, 3});
  CHECK(reduce_word(concat_words({1, 2}, {-2, 3})) == Word{1, 3});
}

TEST_CASE("presentation words for tree and generator edges") {
  const SimplicialComplex k = corpus_complex("circle");
  const Presentation pres = presentation_from_complex(k);
  CHECK(pres.n_generators() == 1);
  int tree_edges = 0, gen_edges = 0;
  for (std::size_t e = 0; e < k.edges.size(); ++e) {
    if (pres.edge_in_tree[e]) {
      ++tree_edges;
      CHECK(word_for_edge(k, pres, k.edges[e][0], k.edges[e][1]).empty());
    } else {
      ++gen_edges;
      CHECK(int(word_for_edge(k, pres, k.edges[e][0], k.edges[e][1]).size()) == 1);
    }
  }
  CHECK(tree_edges == 2);
  CHECK(gen_edges == 1);
  CHECK(word_for_edge(k, pres, 1, 1).empty());

  const SimplicialComplex wedge = corpus_complex("wedge");
  const Presentation wpres = presentation_from_complex(wedge);
  CHECK(wpres.n_generators() == 2);
  int non_edge_v = -1, non_edge_w = -1;
  for (int v = 0; v < wedge.n && non_edge_v < 0; ++v)
    for (int w = v + 1; w < wedge.n; ++w)
      if (wedge.edge_index(v, w) < 0) {
        non_edge_v = v;
        non_edge_w = w;
        break;
      }
  REQUIRE(non_edge_v >= 0);
  CHECK_THROWS_AS(word_for_edge(wedge, wpres, non_edge_v, non_edge_w), AfbError);
}

TEST_CASE("loop words compose edge words along the loop") {
  const SimplicialComplex k = corpus_complex("circle");
  const Presentation pres = presentation_from_complex(k);
  const SimplicialPath loop{{0, 1, 2, 0}};
  const Word w = loop_to_word(k, pres, loop);
  CHECK(int(w.size()) == 1);  // one generator once around
  const Word wrev = loop_to_word(k, pres, SimplicialPath{{0, 2, 1, 0}});
  CHECK(wrev == inverse_word(w));
}

TEST_CASE("filling certificates verify and are found by search") {
  const SimplicialComplex k = corpus_complex("sphere");
  const Presentation pres = presentation_from_complex(k);
  for (std::size_t t = 0; t < k.triangles.size(); ++t) {
    const Word target = reduce_word(pres.relators[t]);
    if (target.empty()) continue;
    const auto cert = search_filling(k, pres, target, 2);
    REQUIRE(cert.has_value());
    const int steps = verify_filling(k, pres, *cert, target);
    CHECK(steps >= 1);
    CHECK(steps <= 2);
  }
  // a filling for the wrong word must not verify
  FillingCertificate wrong;
  wrong.steps.push_back({{}, 0, 1});
  bool threw = false;
  try {
    verify_filling(k, pres, wrong, Word{1, 1, 1, 1, 1});
  } catch (const AfbError&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("triangle relators fill in one step") {
  for (const char* name : {"sphere", "torus", "rp2"}) {
    const SimplicialComplex k = corpus_complex(name);
    const Presentation pres = presentation_from_complex(k);
    for (std::size_t t = 0; t < k.triangles.size(); ++t) {
      const Word target = reduce_word(pres.relators[t]);
      if (target.empty()) continue;
      const auto cert = search_filling(k, pres, target, 1);
      CAPTURE(name); CAPTURE(t);
      REQUIRE(cert.has_value());
      CHECK(verify_filling(k, pres, *cert, target) == 1);
    }
  }
}
