#pragma once

// Smith normal form over Z for small dense integer matrices, with the left
// transform tracked so cokernel coordinates can be read off. Entries stay
// tiny here (exponent sums of triangle relators), int64 is ample.

#include <cstdint>
#include <vector>

namespace afb {

struct IntMat {
  int rows = 0, cols = 0;
  std::vector<int64_t> a;
  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0) {}
  int64_t& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
  int64_t at(int i, int j) const { return a[std::size_t(i) * cols + j]; }
};

// U * A * V = D with U, V unimodular and D diagonal (d_i | d_{i+1}).
struct SmithResult {
  std::vector<int64_t> diag;  // min(rows, cols), trailing zeros for rank gap
  IntMat u;                   // rows x rows
  IntMat v;                   // cols x cols
  int rank = 0;               // number of nonzero diagonal entries
};

SmithResult smith_normal_form(const IntMat& a);

// Cokernel Z^n / colspace(A) presented by SNF: coordinates of a vector x are
// (U x); entries i < rank are classes mod diag[i], the rest are free.
struct CokernelStructure {
  std::vector<int64_t> torsion;  // moduli > 1
  int free_rank = 0;
  // coordinate rows: torsion coords then free coords, applied as y = R x
  IntMat coord;
};

CokernelStructure cokernel(const IntMat& a);

} // namespace afb
