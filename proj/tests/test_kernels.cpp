#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "afb/kernels.hpp"
#include "afb/rng.hpp"

using namespace afb;
using kernels::cd;

namespace {

std::vector<cd> random_buffer(Rng& rng, std::size_t n) {
  std::vector<cd> out(n);
  for (auto& z : out) z = cd(rng.next_gaussian(), rng.next_gaussian());
  return out;
}

double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace

TEST_CASE("scalar matmul matches a hand result") {
  // [[1, i],[2, 0]] * [[1, 1],[0, -i]] = [[1, 1+1],[2, 2]] with (0,1)=1+i*(-i)=2
  std::vector<cd> a = {cd(1, 0), cd(0, 1), cd(2, 0), cd(0, 0)};
  std::vector<cd> b = {cd(1, 0), cd(1, 0), cd(0, 0), cd(0, -1)};
  std::vector<cd> c(4);
  kernels::matmul_scalar(a.data(), b.data(), c.data(), 2, 2, 2);
  CHECK(std::abs(c[0] - cd(1, 0)) < 1e-15);
  CHECK(std::abs(c[1] - cd(2, 0)) < 1e-15);
  CHECK(std::abs(c[2] - cd(2, 0)) < 1e-15);
  CHECK(std::abs(c[3] - cd(2, 0)) < 1e-15);
}

TEST_CASE("avx2 kernels agree with scalar on random shapes") {
  if (!kernels::avx2_supported()) return;
  Rng rng(7);
  const int shapes[][3] = {{1, 1, 1}, {2, 3, 4}, {5, 5, 5}, {7, 1, 9},
                           {8, 8, 8}, {13, 17, 11}, {32, 9, 6}};
  for (const auto& s : shapes) {
    const int m = s[0], k = s[1], n = s[2];
    const auto a = random_buffer(rng, std::size_t(m) * k);
    const auto b = random_buffer(rng, std::size_t(k) * n);
    std::vector<cd> c0(std::size_t(m) * n), c1(std::size_t(m) * n);
    kernels::matmul_scalar(a.data(), b.data(), c0.data(), m, k, n);
    kernels::matmul_avx2(a.data(), b.data(), c1.data(), m, k, n);
    CHECK(max_abs_diff(c0, c1) < 1e-12);
  }
}

TEST_CASE("avx2 axpy and norm agree with scalar") {
  if (!kernels::avx2_supported()) return;
  Rng rng(11);
  for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 64u, 129u}) {
    const auto x = random_buffer(rng, n);
    auto y0 = random_buffer(rng, n);
    auto y1 = y0;
    const cd alpha(rng.next_gaussian(), rng.next_gaussian());
    kernels::axpy_scalar(alpha, x.data(), y0.data(), n);
    kernels::axpy_avx2(alpha, x.data(), y1.data(), n);
    CHECK(max_abs_diff(y0, y1) < 1e-12);
    CHECK(kernels::norm2_sq_scalar(x.data(), n) ==
          doctest::Approx(kernels::norm2_sq_avx2(x.data(), n)).epsilon(1e-13));
  }
}

TEST_CASE("isa override switches the active dispatch") {
  const kernels::Isa saved = kernels::active_isa();
  kernels::set_isa(kernels::Isa::Scalar);
  CHECK(kernels::active_isa() == kernels::Isa::Scalar);

  Rng rng(3);
  const auto a = random_buffer(rng, 6 * 5);
  const auto b = random_buffer(rng, 5 * 4);
  std::vector<cd> c0(6 * 4), c1(6 * 4);
  kernels::matmul(a.data(), b.data(), c0.data(), 6, 5, 4);
  if (kernels::avx2_supported()) {
    kernels::set_isa(kernels::Isa::Avx2);
    CHECK(kernels::active_isa() == kernels::Isa::Avx2);
    kernels::matmul(a.data(), b.data(), c1.data(), 6, 5, 4);
    CHECK(max_abs_diff(c0, c1) < 1e-12);
  }
  kernels::set_isa(saved);
}

TEST_CASE("norm2_sq sums squared magnitudes") {
  std::vector<cd> x = {cd(3, 4), cd(0, 0), cd(1, -1)};
  CHECK(kernels::norm2_sq(x.data(), x.size()) == doctest::Approx(27.0));
}
