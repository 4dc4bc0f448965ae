#include "afb/snf.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace afb {

namespace {

void swap_rows(IntMat& m, int i, int j) {
  for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}
void swap_cols(IntMat& m, int i, int j) {
  for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}
// row i -= q * row j
void row_op(IntMat& m, int i, int j, int64_t q) {
  for (int c = 0; c < m.cols; ++c) m.at(i, c) -= q * m.at(j, c);
}
void col_op(IntMat& m, int i, int j, int64_t q) {
  for (int r = 0; r < m.rows; ++r) m.at(r, i) -= q * m.at(r, j);
}

} // namespace

SmithResult smith_normal_form(const IntMat& a0) {
  IntMat d = a0;
  SmithResult r;
  r.u = IntMat(d.rows, d.rows);
  r.v = IntMat(d.cols, d.cols);
  for (int i = 0; i < d.rows; ++i) r.u.at(i, i) = 1;
  for (int i = 0; i < d.cols; ++i) r.v.at(i, i) = 1;

  const int k = std::min(d.rows, d.cols);
  int t = 0;
  while (t < k) {
    // find pivot: smallest nonzero |entry| in the remaining block
    int pi = -1, pj = -1;
    int64_t best = 0;
    for (int i = t; i < d.rows; ++i)
      for (int j = t; j < d.cols; ++j) {
        const int64_t v = std::llabs(d.at(i, j));
        if (v != 0 && (pi < 0 || v < best)) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    if (pi != t) {
      swap_rows(d, pi, t);
      swap_rows(r.u, pi, t);
    }
    if (pj != t) {
      swap_cols(d, pj, t);
      swap_cols(r.v, pj, t);
    }
    bool clean = true;
    for (int i = t + 1; i < d.rows; ++i) {
      const int64_t q = d.at(i, t) / d.at(t, t);
      if (q != 0) {
        row_op(d, i, t, q);
        row_op(r.u, i, t, q);
      }
      if (d.at(i, t) != 0) clean = false;
    }
    for (int j = t + 1; j < d.cols; ++j) {
      const int64_t q = d.at(t, j) / d.at(t, t);
      if (q != 0) {
        col_op(d, j, t, q);
        col_op(r.v, j, t, q);
      }
      if (d.at(t, j) != 0) clean = false;
    }
    if (!clean) continue;  // remainders left, pick a new (smaller) pivot
    // divisibility fix-up: pivot must divide the rest of the block
    bool divides = true;
    for (int i = t + 1; i < d.rows && divides; ++i)
      for (int j = t + 1; j < d.cols && divides; ++j)
        if (d.at(i, j) % d.at(t, t) != 0) {
          // add row i to row t, restart elimination at t
          row_op(d, t, i, -1);
          row_op(r.u, t, i, -1);
          divides = false;
        }
    if (!divides) continue;
    if (d.at(t, t) < 0) {
      for (int c = 0; c < d.cols; ++c) d.at(t, c) = -d.at(t, c);
      for (int c = 0; c < r.u.cols; ++c) r.u.at(t, c) = -r.u.at(t, c);
    }
    ++t;
  }
  r.diag.assign(std::size_t(k), 0);
  for (int i = 0; i < t; ++i) r.diag[i] = d.at(i, i);
  r.rank = t;
  return r;
}

CokernelStructure cokernel(const IntMat& a) {
  SmithResult s = smith_normal_form(a);
  CokernelStructure c;
  const int n = a.rows;
  std::vector<int> torsion_rows, free_rows;
  for (int i = 0; i < s.rank; ++i)
    if (s.diag[i] > 1) {
      torsion_rows.push_back(i);
      c.torsion.push_back(s.diag[i]);
    }
  for (int i = s.rank; i < n; ++i) free_rows.push_back(i);
  c.free_rank = int(free_rows.size());
  c.coord = IntMat(int(torsion_rows.size()) + c.free_rank, n);
  int out = 0;
  for (int i : torsion_rows) {
    for (int j = 0; j < n; ++j) c.coord.at(out, j) = s.u.at(i, j);
    ++out;
  }
  for (int i : free_rows) {
    for (int j = 0; j < n; ++j) c.coord.at(out, j) = s.u.at(i, j);
    ++out;
  }
  return c;
}

} // namespace afb
