#include "afb/cmatrix.hpp"

#include <cmath>

namespace afb {

void fail(const std::string& kind, const std::string& msg) {
  throw AfbError(kind, msg);
}

CMatrix CMatrix::identity(int n) {
  CMatrix r(n, n);
  for (int i = 0; i < n; ++i) r.at(i, i) = cd(1.0, 0.0);
  return r;
}

CMatrix CMatrix::diag(const std::vector<double>& d) {
  CMatrix r(int(d.size()), int(d.size()));
  for (int i = 0; i < int(d.size()); ++i) r.at(i, i) = cd(d[i], 0.0);
  return r;
}

CMatrix CMatrix::kron(const CMatrix& A, const CMatrix& B) {
  CMatrix r(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) {
      const cd a = A.at(i, j);
      if (a == cd(0.0, 0.0)) continue;
      for (int p = 0; p < B.rows(); ++p)
        for (int q = 0; q < B.cols(); ++q)
          r.at(i * B.rows() + p, j * B.cols() + q) = a * B.at(p, q);
    }
  return r;
}

CMatrix CMatrix::direct_sum(const CMatrix& A, const CMatrix& B) {
  CMatrix r(A.rows() + B.rows(), A.cols() + B.cols());
  r.set_block(0, 0, A);
  r.set_block(A.rows(), A.cols(), B);
  return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols_ != o.rows_) fail("ShapeMismatch", "matmul shapes");
  CMatrix r(rows_, o.cols_);
  kernels::matmul(data(), o.data(), r.data(), rows_, cols_, o.cols_);
  return r;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  CMatrix r = *this;
  r += o;
  return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  CMatrix r = *this;
  r -= o;
  return r;
}

CMatrix CMatrix::operator*(cd s) const {
  CMatrix r(rows_, cols_);
  kernels::axpy(s, data(), r.data(), a_.size());
  return r;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (!same_shape(o)) fail("ShapeMismatch", "add shapes");
  kernels::axpy(cd(1.0, 0.0), o.data(), data(), a_.size());
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (!same_shape(o)) fail("ShapeMismatch", "sub shapes");
  kernels::axpy(cd(-1.0, 0.0), o.data(), data(), a_.size());
  return *this;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = std::conj(at(i, j));
  return r;
}

cd CMatrix::trace() const {
  cd s(0.0, 0.0);
  for (int i = 0; i < std::min(rows_, cols_); ++i) s += at(i, i);
  return s;
}

double CMatrix::fro_norm() const {
  return std::sqrt(kernels::norm2_sq(data(), a_.size()));
}

double CMatrix::max_abs() const {
  double s = 0.0;
  for (const cd& z : a_) s = std::max(s, std::abs(z));
  return s;
}

CMatrix CMatrix::block(int r0, int c0, int h, int w) const {
  CMatrix r(h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) r.at(i, j) = at(r0 + i, c0 + j);
  return r;
}

void CMatrix::set_block(int r0, int c0, const CMatrix& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) at(r0 + i, c0 + j) = b.at(i, j);
}

CMatrix CMatrix::submatrix(const std::vector<int>& ri,
                           const std::vector<int>& ci) const {
  CMatrix r(int(ri.size()), int(ci.size()));
  for (int i = 0; i < int(ri.size()); ++i)
    for (int j = 0; j < int(ci.size()); ++j) r.at(i, j) = at(ri[i], ci[j]);
  return r;
}

void CMatrix::scatter_add(const std::vector<int>& ri,
                          const std::vector<int>& ci, const CMatrix& b) {
  for (int i = 0; i < int(ri.size()); ++i)
    for (int j = 0; j < int(ci.size()); ++j) at(ri[i], ci[j]) += b.at(i, j);
}

// ---------------------------------------------------------------------------

Grading Grading::of(const GradedSpace& w) {
  Grading g;
  g.sign.assign(std::size_t(w.dim()), int8_t(1));
  for (int i = w.dim0(); i < w.dim(); ++i) g.sign[i] = -1;
  return g;
}

Grading Grading::opposite() const {
  Grading g = *this;
  for (auto& s : g.sign) s = int8_t(-s);
  return g;
}

Grading Grading::concat(const Grading& a, const Grading& b) {
  Grading g = a;
  g.sign.insert(g.sign.end(), b.sign.begin(), b.sign.end());
  return g;
}

Grading Grading::repeat(const Grading& g, int copies) {
  Grading r;
  for (int i = 0; i < copies; ++i) r = concat(r, g);
  return r;
}

std::vector<int> Grading::even_indices() const {
  std::vector<int> v;
  for (int i = 0; i < dim(); ++i)
    if (sign[i] > 0) v.push_back(i);
  return v;
}

std::vector<int> Grading::odd_indices() const {
  std::vector<int> v;
  for (int i = 0; i < dim(); ++i)
    if (sign[i] < 0) v.push_back(i);
  return v;
}

CMatrix Grading::involution() const {
  CMatrix r(dim(), dim());
  for (int i = 0; i < dim(); ++i) r.at(i, i) = cd(double(sign[i]), 0.0);
  return r;
}

double even_defect(const CMatrix& a, const Grading& g) {
  // even means g_i != g_j entries vanish
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (g.sign[i] != g.sign[j]) s += std::norm(a.at(i, j));
  return std::sqrt(s);
}

double odd_defect(const CMatrix& a, const Grading& g) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (g.sign[i] == g.sign[j]) s += std::norm(a.at(i, j));
  return std::sqrt(s);
}

double self_adjoint_defect(const CMatrix& a) { return (a - a.adjoint()).fro_norm(); }

double unitary_defect(const CMatrix& a) {
  CMatrix g = a.adjoint() * a;
  return (g - CMatrix::identity(g.rows())).fro_norm();
}

} // namespace afb
