#pragma once

// Finite simplicial complexes of dimension <= 3 with ordered vertices,
// points in barycentric coordinates, edge paths, and the edge/triangle
// presentation of the fundamental group: spanning-tree edges act as the
// identity generator, each 2-simplex contributes one relator, and filling
// certificates express a word as a product of conjugated relators.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "afb/snf.hpp"

namespace afb {

using Word = std::vector<int>;  // letters +-(generator index + 1)

Word reduce_word(Word w);
Word inverse_word(const Word& w);
Word concat_words(const Word& a, const Word& b);

struct Point {
  int dim = 0;    // carrier dimension
  int index = 0;  // carrier index within the complex's simplex list
  std::vector<double> bary;  // strictly positive, sums to 1, size dim+1
};

struct SimplicialComplex {
  int n = 0;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 4>> tetrahedra;

  // named oriented 2-cycles: list of (triangle index, +-1)
  std::map<std::string, std::vector<std::pair<int, int>>> cycles;

  // optional flat charts: per triangle, planar coordinates of its three
  // vertices (ascending order), compatible across shared edges modulo Z^2
  std::vector<std::array<std::array<double, 2>, 3>> tri_chart;

  static SimplicialComplex from_simplices(
      int n_vertices, const std::vector<std::vector<int>>& simplices);

  int edge_index(int v, int w) const;        // -1 if absent
  int triangle_index(int a, int b, int c) const;
  std::vector<int> simplex_vertices(int dim, int index) const;
  bool spans_simplex(std::vector<int> verts) const;
  int dimension() const;

  void register_cycle(const std::string& name,
                      const std::vector<std::pair<int, int>>& chain);
};

// Point utilities ------------------------------------------------------------

// Point from weights on the vertices of one simplex; near-zero weights are
// dropped to the spanned face, which must exist in the complex.
Point make_point(const SimplicialComplex& k, const std::vector<int>& verts,
                 const std::vector<double>& weights);

// All-vertex barycentric coordinate vector (zeros off the carrier).
std::vector<double> barycentric_coords(const SimplicialComplex& k,
                                       const Point& p);

bool open_star_membership(const SimplicialComplex& k, const Point& p,
                          int vertex);

// Vertices of the `level`-fold barycentric subdivision, deduplicated across
// shared faces. level = 2 is the default family sample set.
std::vector<Point> sample_points(const SimplicialComplex& k, int level);

// Oriented triangular mesh of one 2-simplex after `level` barycentric
// subdivisions; corners ordered coherently with the ascending-vertex
// orientation of the parent triangle.
struct MeshTriangle {
  std::array<Point, 3> corner;
};
std::vector<MeshTriangle> mesh_triangle(const SimplicialComplex& k,
                                        int tri_index, int level);

// Chart coordinates of a point (complexes with tri_chart only); any triangle
// containing the carrier gives the same value modulo Z^2.
std::array<double, 2> chart_coords(const SimplicialComplex& k, const Point& p);

// Paths and presentations ----------------------------------------------------

struct SimplicialPath {
  std::vector<int> vertices;
  bool is_loop() const {
    return vertices.size() >= 2 && vertices.front() == vertices.back();
  }
};

struct Presentation {
  int basepoint = 0;
  std::vector<int> parent;       // BFS tree, -1 at the root
  std::vector<char> edge_in_tree;
  std::vector<int> gen_of_edge;  // -1 for tree edges
  std::vector<int> edge_of_gen;
  std::vector<Word> relators;    // aligned with k.triangles

  int n_generators() const { return int(edge_of_gen.size()); }
};

Presentation presentation_from_complex(const SimplicialComplex& k,
                                       int basepoint = 0);

// Word of the oriented edge (v,w): empty for tree edges and v == w,
// otherwise one letter. Errors if {v,w} is not an edge.
Word word_for_edge(const SimplicialComplex& k, const Presentation& pres,
                   int v, int w);

Word loop_to_word(const SimplicialComplex& k, const Presentation& pres,
                  const SimplicialPath& loop);

struct FillingCertificate {
  // steps listed outermost first: target = prod_i u_i r_i^{s_i} u_i^{-1}
  struct Step {
    Word conjugator;
    int relator = 0;  // triangle index
    int sign = 1;
  };
  std::vector<Step> steps;
};

// Number of steps if the certificate multiplies out to `target`; errors
// otherwise. The step count is the constant in the transport loop bound.
int verify_filling(const SimplicialComplex& k, const Presentation& pres,
                   const FillingCertificate& cert, const Word& target);

// Breadth-first search for a filling by relator insertion at every position;
// deterministic, bounded by max_steps and a word-length cap.
std::optional<FillingCertificate> search_filling(const SimplicialComplex& k,
                                                 const Presentation& pres,
                                                 const Word& target,
                                                 int max_steps,
                                                 int max_len = -1);

// Abelianization data: coordinates of each generator in H1 presented as
// torsion components (mod moduli) followed by free components.
struct H1Coords {
  std::vector<int64_t> moduli;
  int free_rank = 0;
  std::vector<std::vector<int64_t>> gen_coords;
};

H1Coords h1_of_presentation(const Presentation& pres);

} // namespace afb
