#pragma once

// Dense complex matrices over C, plus the graded bookkeeping used everywhere:
// a fiber W = B^d with B = M_m(C) and d = d0 + d1 is modelled as M_{(d0+d1)m}(C)
// with the first d0*m coordinates even and the last d1*m odd. Spaces built by
// direct sums and grading flips carry an explicit sign vector instead.

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "afb/kernels.hpp"

namespace afb {

using cd = std::complex<double>;

class CMatrix {
public:
  CMatrix() = default;
  CMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, cd(0.0, 0.0)) {}

  static CMatrix identity(int n);
  static CMatrix zero(int rows, int cols) { return CMatrix(rows, cols); }
  static CMatrix diag(const std::vector<double>& d);
  static CMatrix kron(const CMatrix& A, const CMatrix& B);
  static CMatrix direct_sum(const CMatrix& A, const CMatrix& B);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  cd& at(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  const cd& at(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }
  const cd* data() const { return a_.data(); }
  cd* data() { return a_.data(); }

  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(cd s) const;
  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix operator-() const { return *this * cd(-1.0, 0.0); }

  CMatrix adjoint() const;
  cd trace() const;
  double fro_norm() const;
  double max_abs() const;

  CMatrix block(int r0, int c0, int h, int w) const;
  void set_block(int r0, int c0, const CMatrix& b);

  // Rows/columns picked by index lists (used to split along a grading).
  CMatrix submatrix(const std::vector<int>& ri, const std::vector<int>& ci) const;
  void scatter_add(const std::vector<int>& ri, const std::vector<int>& ci,
                   const CMatrix& b);

  bool same_shape(const CMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

private:
  int rows_ = 0, cols_ = 0;
  std::vector<cd> a_;
};

inline CMatrix operator*(cd s, const CMatrix& m) { return m * s; }

// ---------------------------------------------------------------------------

// Fiber description: W = B^{d0+d1}, B = M_m(C), first d0 summands even.
struct GradedSpace {
  int d0 = 0;
  int d1 = 0;
  int m = 1;
  int dim0() const { return d0 * m; }
  int dim1() const { return d1 * m; }
  int dim() const { return (d0 + d1) * m; }
  GradedSpace opposite() const { return GradedSpace{d1, d0, m}; }
  bool operator==(const GradedSpace&) const = default;
};

// General grading as a +-1 sign per coordinate.
struct Grading {
  std::vector<int8_t> sign;

  int dim() const { return int(sign.size()); }
  static Grading of(const GradedSpace& w);
  Grading opposite() const;
  static Grading concat(const Grading& a, const Grading& b);
  static Grading repeat(const Grading& g, int copies);
  std::vector<int> even_indices() const;
  std::vector<int> odd_indices() const;
  CMatrix involution() const;  // diag(sign)
};

// Norm of the block of A that anticommutes (resp. commutes) with the grading,
// i.e. how far A is from being even (resp. odd).
double even_defect(const CMatrix& a, const Grading& g);
double odd_defect(const CMatrix& a, const Grading& g);

double self_adjoint_defect(const CMatrix& a);
double unitary_defect(const CMatrix& a);

struct AfbError : std::runtime_error {
  std::string kind;
  AfbError(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

[[noreturn]] void fail(const std::string& kind, const std::string& msg);

} // namespace afb
