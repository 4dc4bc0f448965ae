#include "afb/simplicial.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "afb/cmatrix.hpp"  // for fail()

namespace afb {

Word reduce_word(Word w) {
  Word out;
  for (int l : w) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& l : out) l = -l;
  return out;
}

Word concat_words(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// ---------------------------------------------------------------------------

SimplicialComplex SimplicialComplex::from_simplices(
    int n_vertices, const std::vector<std::vector<int>>& simplices) {
  SimplicialComplex k;
  k.n = n_vertices;
  std::set<std::array<int, 2>> es;
  std::set<std::array<int, 3>> ts;
  std::set<std::array<int, 4>> qs;
  for (const auto& s : simplices) {
    if (s.empty() || s.size() > 4)
      fail("InputError", "simplex dimension out of range");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 0 || s[i] >= n_vertices)
        fail("InputError", "vertex index out of range");
      if (i > 0 && s[i] <= s[i - 1])
        fail("InputError", "simplex vertices must be strictly ascending");
    }
    if (s.size() == 4) qs.insert({s[0], s[1], s[2], s[3]});
    if (s.size() >= 3)
      for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
          for (std::size_t c = b + 1; c < s.size(); ++c)
            ts.insert({s[a], s[b], s[c]});
    if (s.size() >= 2)
      for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
          es.insert({s[a], s[b]});
  }
  k.edges.assign(es.begin(), es.end());
  k.triangles.assign(ts.begin(), ts.end());
  k.tetrahedra.assign(qs.begin(), qs.end());
  return k;
}

int SimplicialComplex::edge_index(int v, int w) const {
  if (v > w) std::swap(v, w);
  const std::array<int, 2> key{v, w};
  auto it = std::lower_bound(edges.begin(), edges.end(), key);
  if (it == edges.end() || *it != key) return -1;
  return int(it - edges.begin());
}

int SimplicialComplex::triangle_index(int a, int b, int c) const {
  std::array<int, 3> key{a, b, c};
  std::sort(key.begin(), key.end());
  auto it = std::lower_bound(triangles.begin(), triangles.end(), key);
  if (it == triangles.end() || *it != key) return -1;
  return int(it - triangles.begin());
}

std::vector<int> SimplicialComplex::simplex_vertices(int dim, int index) const {
  switch (dim) {
    case 0:
      return {index};
    case 1:
      return {edges[index][0], edges[index][1]};
    case 2:
      return {triangles[index][0], triangles[index][1], triangles[index][2]};
    case 3:
      return {tetrahedra[index][0], tetrahedra[index][1], tetrahedra[index][2],
              tetrahedra[index][3]};
    default:
      fail("InputError", "bad simplex dimension");
  }
}

bool SimplicialComplex::spans_simplex(std::vector<int> verts) const {
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  switch (verts.size()) {
    case 1:
      return verts[0] >= 0 && verts[0] < n;
    case 2:
      return edge_index(verts[0], verts[1]) >= 0;
    case 3:
      return triangle_index(verts[0], verts[1], verts[2]) >= 0;
    case 4: {
      std::array<int, 4> key{verts[0], verts[1], verts[2], verts[3]};
      return std::binary_search(tetrahedra.begin(), tetrahedra.end(), key);
    }
    default:
      return false;
  }
}

int SimplicialComplex::dimension() const {
  if (!tetrahedra.empty()) return 3;
  if (!triangles.empty()) return 2;
  if (!edges.empty()) return 1;
  return 0;
}

void SimplicialComplex::register_cycle(
    const std::string& name, const std::vector<std::pair<int, int>>& chain) {
  // boundary must cancel: d(a<b<c) = (b,c) - (a,c) + (a,b)
  std::map<int, int> bd;
  for (const auto& [t, s] : chain) {
    if (t < 0 || t >= int(triangles.size()) || (s != 1 && s != -1))
      fail("InputError", "bad chain entry in cycle " + name);
    const auto& tri = triangles[t];
    bd[edge_index(tri[1], tri[2])] += s;
    bd[edge_index(tri[0], tri[2])] -= s;
    bd[edge_index(tri[0], tri[1])] += s;
  }
  for (const auto& [e, c] : bd)
    if (c != 0)
      fail("InputError", "chain is not a cycle at edge " + std::to_string(e));
  cycles[name] = chain;
}

// ---------------------------------------------------------------------------

Point make_point(const SimplicialComplex& k, const std::vector<int>& verts,
                 const std::vector<double>& weights) {
  if (verts.size() != weights.size() || verts.empty())
    fail("InputError", "make_point arity");
  const double eps = 1e-12;
  std::vector<std::pair<int, double>> kept;
  double total = 0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (weights[i] < -eps) fail("InputError", "negative weight");
    if (weights[i] > eps) kept.push_back({verts[i], weights[i]});
    total += std::max(weights[i], 0.0);
  }
  if (kept.empty() || total <= 0) fail("InputError", "zero weight point");
  std::sort(kept.begin(), kept.end());
  for (std::size_t i = 1; i < kept.size(); ++i)
    if (kept[i].first == kept[i - 1].first)
      fail("InputError", "duplicate vertex in point");

  Point p;
  p.dim = int(kept.size()) - 1;
  std::vector<int> vs;
  for (auto& [v, w] : kept) vs.push_back(v);
  switch (p.dim) {
    case 0:
      p.index = vs[0];
      break;
    case 1:
      p.index = k.edge_index(vs[0], vs[1]);
      break;
    case 2:
      p.index = k.triangle_index(vs[0], vs[1], vs[2]);
      break;
    case 3: {
      std::array<int, 4> key{vs[0], vs[1], vs[2], vs[3]};
      auto it =
          std::lower_bound(k.tetrahedra.begin(), k.tetrahedra.end(), key);
      p.index = (it != k.tetrahedra.end() && *it == key)
                    ? int(it - k.tetrahedra.begin())
                    : -1;
      break;
    }
    default:
      p.index = -1;
  }
  if (p.index < 0) fail("InputError", "point carrier is not a simplex");
  for (auto& [v, w] : kept) p.bary.push_back(w / total);
  return p;
}

std::vector<double> barycentric_coords(const SimplicialComplex& k,
                                       const Point& p) {
  std::vector<double> lambda(std::size_t(k.n), 0.0);
  const std::vector<int> vs = k.simplex_vertices(p.dim, p.index);
  for (std::size_t i = 0; i < vs.size(); ++i) lambda[vs[i]] = p.bary[i];
  return lambda;
}

bool open_star_membership(const SimplicialComplex& k, const Point& p,
                          int vertex) {
  const std::vector<int> vs = k.simplex_vertices(p.dim, p.index);
  return std::find(vs.begin(), vs.end(), vertex) != vs.end();
}

namespace {

// barycentric subdivision of an abstract simplex whose corners carry
// coordinate vectors; one sub-simplex per permutation chain
void subdivide(const std::vector<std::vector<double>>& corners,
               std::vector<std::vector<std::vector<double>>>& out) {
  const int j = int(corners.size());
  std::vector<int> perm(j);
  for (int i = 0; i < j; ++i) perm[i] = i;
  const std::size_t d = corners[0].size();
  do {
    std::vector<std::vector<double>> sub;
    std::vector<double> acc(d, 0.0);
    for (int i = 0; i < j; ++i) {
      for (std::size_t t = 0; t < d; ++t) acc[t] += corners[perm[i]][t];
      std::vector<double> b(d);
      for (std::size_t t = 0; t < d; ++t) b[t] = acc[t] / double(i + 1);
      sub.push_back(b);
    }
    out.push_back(sub);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

int64_t quant(double x) { return int64_t(std::llround(x * 1048576.0 * 4096)); }

} // namespace

std::vector<Point> sample_points(const SimplicialComplex& k, int level) {
  // maximal simplices: not a proper face of anything present
  std::vector<std::vector<int>> maximal;
  auto face_of_bigger = [&](const std::vector<int>& vs) {
    if (vs.size() == 1) {
      for (const auto& e : k.edges)
        if (e[0] == vs[0] || e[1] == vs[0]) return true;
      return false;
    }
    if (vs.size() == 2) {
      for (const auto& t : k.triangles)
        if (std::includes(t.begin(), t.end(), vs.begin(), vs.end()))
          return true;
      return false;
    }
    if (vs.size() == 3) {
      for (const auto& q : k.tetrahedra)
        if (std::includes(q.begin(), q.end(), vs.begin(), vs.end()))
          return true;
      return false;
    }
    return false;
  };
  for (int v = 0; v < k.n; ++v)
    if (!face_of_bigger({v})) maximal.push_back({v});
  for (const auto& e : k.edges)
    if (!face_of_bigger({e[0], e[1]})) maximal.push_back({e[0], e[1]});
  for (const auto& t : k.triangles)
    if (!face_of_bigger({t[0], t[1], t[2]})) maximal.push_back({t[0], t[1], t[2]});
  for (const auto& q : k.tetrahedra)
    maximal.push_back({q[0], q[1], q[2], q[3]});

  std::vector<Point> points;
  std::set<std::vector<int64_t>> seen;
  for (const auto& vs : maximal) {
    const int j = int(vs.size());
    std::vector<std::vector<std::vector<double>>> cells;
    {
      std::vector<std::vector<double>> corners;
      for (int i = 0; i < j; ++i) {
        std::vector<double> c(std::size_t(j), 0.0);
        c[i] = 1.0;
        corners.push_back(c);
      }
      cells.push_back(corners);
    }
    for (int l = 0; l < level; ++l) {
      std::vector<std::vector<std::vector<double>>> next;
      for (const auto& cell : cells) subdivide(cell, next);
      cells = std::move(next);
    }
    for (const auto& cell : cells)
      for (const auto& corner : cell) {
        Point p = make_point(k, vs, corner);
        std::vector<int64_t> key{int64_t(p.dim), int64_t(p.index)};
        for (double b : p.bary) key.push_back(quant(b));
        if (seen.insert(key).second) points.push_back(p);
      }
  }
  return points;
}

std::vector<MeshTriangle> mesh_triangle(const SimplicialComplex& k,
                                        int tri_index, int level) {
  const auto& tri = k.triangles[tri_index];
  const std::vector<int> vs{tri[0], tri[1], tri[2]};
  using Coord = std::array<std::array<double, 3>, 3>;
  std::vector<Coord> cells{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}};
  auto mid = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::array<double, 3>{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2,
                                 (a[2] + b[2]) / 2};
  };
  for (int l = 0; l < level; ++l) {
    std::vector<Coord> next;
    for (const auto& c : cells) {
      const auto &A = c[0], &B = c[1], &C = c[2];
      const std::array<double, 3> g{(A[0] + B[0] + C[0]) / 3,
                                    (A[1] + B[1] + C[1]) / 3,
                                    (A[2] + B[2] + C[2]) / 3};
      const auto mab = mid(A, B), mbc = mid(B, C), mca = mid(C, A);
      next.push_back({A, mab, g});
      next.push_back({mab, B, g});
      next.push_back({B, mbc, g});
      next.push_back({mbc, C, g});
      next.push_back({C, mca, g});
      next.push_back({mca, A, g});
    }
    cells = std::move(next);
  }
  std::vector<MeshTriangle> out;
  for (const auto& c : cells) {
    MeshTriangle mt;
    for (int i = 0; i < 3; ++i)
      mt.corner[i] = make_point(k, vs, {c[i][0], c[i][1], c[i][2]});
    out.push_back(mt);
  }
  return out;
}

std::array<double, 2> chart_coords(const SimplicialComplex& k,
                                   const Point& p) {
  if (k.tri_chart.size() != k.triangles.size())
    fail("InputError", "complex has no charts");
  const std::vector<int> carrier = k.simplex_vertices(p.dim, p.index);
  for (int t = 0; t < int(k.triangles.size()); ++t) {
    const auto& tri = k.triangles[t];
    if (!std::includes(tri.begin(), tri.end(), carrier.begin(),
                       carrier.end()))
      continue;
    std::array<double, 2> xy{0, 0};
    for (std::size_t i = 0; i < carrier.size(); ++i) {
      int pos = int(std::find(tri.begin(), tri.end(), carrier[i]) -
                    tri.begin());
      xy[0] += p.bary[i] * k.tri_chart[t][pos][0];
      xy[1] += p.bary[i] * k.tri_chart[t][pos][1];
    }
    return xy;
  }
  fail("InputError", "point carrier not contained in any triangle");
}

// ---------------------------------------------------------------------------

Presentation presentation_from_complex(const SimplicialComplex& k,
                                       int basepoint) {
  if (basepoint < 0 || basepoint >= k.n)
    fail("InputError", "basepoint out of range");
  Presentation pres;
  pres.basepoint = basepoint;
  pres.parent.assign(std::size_t(k.n), -2);  // -2 unvisited
  pres.edge_in_tree.assign(k.edges.size(), 0);

  std::vector<std::vector<int>> adj(std::size_t(k.n));
  for (const auto& e : k.edges) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::deque<int> queue{basepoint};
  pres.parent[basepoint] = -1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : adj[v])
      if (pres.parent[w] == -2) {
        pres.parent[w] = v;
        pres.edge_in_tree[k.edge_index(v, w)] = 1;
        queue.push_back(w);
      }
  }
  for (int v = 0; v < k.n; ++v)
    if (pres.parent[v] == -2)
      fail("InputError", "complex is not connected");

  pres.gen_of_edge.assign(k.edges.size(), -1);
  for (int e = 0; e < int(k.edges.size()); ++e)
    if (!pres.edge_in_tree[e]) {
      pres.gen_of_edge[e] = int(pres.edge_of_gen.size());
      pres.edge_of_gen.push_back(e);
    }

  for (const auto& tri : k.triangles) {
    Word r;
    auto push_edge = [&](int v, int w) {
      const int e = k.edge_index(v, w);
      const int g = pres.gen_of_edge[e];
      if (g < 0) return;
      r.push_back(v < w ? (g + 1) : -(g + 1));
    };
    push_edge(tri[0], tri[1]);
    push_edge(tri[1], tri[2]);
    push_edge(tri[2], tri[0]);
    pres.relators.push_back(reduce_word(r));
  }
  return pres;
}

Word word_for_edge(const SimplicialComplex& k, const Presentation& pres,
                   int v, int w) {
  if (v == w) return {};
  const int e = k.edge_index(v, w);
  if (e < 0) fail("InputError", "not an edge");
  const int g = pres.gen_of_edge[e];
  if (g < 0) return {};
  return {v < w ? (g + 1) : -(g + 1)};
}

Word loop_to_word(const SimplicialComplex& k, const Presentation& pres,
                  const SimplicialPath& loop) {
  if (!loop.is_loop()) fail("InputError", "path is not a loop");
  Word w;
  for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i) {
    const Word step =
        word_for_edge(k, pres, loop.vertices[i], loop.vertices[i + 1]);
    w.insert(w.end(), step.begin(), step.end());
  }
  return reduce_word(w);
}

int verify_filling(const SimplicialComplex& k, const Presentation& pres,
                   const FillingCertificate& cert, const Word& target) {
  (void)k;
  Word acc;
  for (const auto& step : cert.steps) {
    if (step.relator < 0 || step.relator >= int(pres.relators.size()))
      fail("InputError", "certificate relator out of range");
    Word r = pres.relators[step.relator];
    if (step.sign < 0) r = inverse_word(r);
    acc = concat_words(
        acc, concat_words(step.conjugator,
                          concat_words(r, inverse_word(step.conjugator))));
  }
  if (reduce_word(acc) != reduce_word(target))
    fail("FillingMismatch", "certificate does not multiply to the target");
  return int(cert.steps.size());
}

std::optional<FillingCertificate> search_filling(const SimplicialComplex& k,
                                                 const Presentation& pres,
                                                 const Word& target,
                                                 int max_steps, int max_len) {
  (void)k;
  const Word goal = reduce_word(target);
  if (goal.empty()) return FillingCertificate{};
  if (pres.relators.empty()) return std::nullopt;
  int cap = max_len;
  if (cap < 0) {
    std::size_t rmax = 0;
    for (const auto& r : pres.relators) rmax = std::max(rmax, r.size());
    cap = int(goal.size() + 2 * rmax + 4);
  }

  struct NodeInfo {
    Word prev;
    int pos = 0, relator = 0, sign = 1, depth = 0;
  };
  std::map<Word, NodeInfo> visited;
  std::deque<Word> queue;
  visited[{}] = NodeInfo{{}, -1, -1, 0, 0};
  queue.push_back({});

  while (!queue.empty()) {
    Word cur = queue.front();
    queue.pop_front();
    const int depth = visited[cur].depth;
    if (depth >= max_steps) continue;
    for (int ri = 0; ri < int(pres.relators.size()); ++ri) {
      if (pres.relators[ri].empty()) continue;
      for (int sign = 1; sign >= -1; sign -= 2) {
        Word rel = pres.relators[ri];
        if (sign < 0) rel = inverse_word(rel);
        for (int pos = 0; pos <= int(cur.size()); ++pos) {
          Word next(cur.begin(), cur.begin() + pos);
          next.insert(next.end(), rel.begin(), rel.end());
          next.insert(next.end(), cur.begin() + pos, cur.end());
          next = reduce_word(next);
          if (int(next.size()) > cap) continue;
          if (visited.count(next)) continue;
          visited[next] = NodeInfo{cur, pos, ri, sign, depth + 1};
          if (next == goal) {
            // walk back; insertions recovered innermost-last
            FillingCertificate cert;
            Word node = next;
            while (true) {
              const NodeInfo& info = visited[node];
              if (info.pos < 0) break;
              FillingCertificate::Step step;
              step.conjugator =
                  Word(info.prev.begin(), info.prev.begin() + info.pos);
              step.relator = info.relator;
              step.sign = info.sign;
              cert.steps.push_back(step);
              node = info.prev;
            }
            return cert;
          }
          queue.push_back(next);
        }
      }
    }
  }
  return std::nullopt;
}

H1Coords h1_of_presentation(const Presentation& pres) {
  const int ngen = pres.n_generators();
  IntMat rt(ngen, std::max<int>(1, int(pres.relators.size())));
  for (int r = 0; r < int(pres.relators.size()); ++r)
    for (int l : pres.relators[r]) rt.at(std::abs(l) - 1, r) += (l > 0 ? 1 : -1);
  CokernelStructure c = cokernel(rt);
  H1Coords h;
  h.moduli = c.torsion;
  h.free_rank = c.free_rank;
  for (int g = 0; g < ngen; ++g) {
    std::vector<int64_t> coords;
    for (int i = 0; i < c.coord.rows; ++i) coords.push_back(c.coord.at(i, g));
    h.gen_coords.push_back(coords);
  }
  return h;
}

} // namespace afb
