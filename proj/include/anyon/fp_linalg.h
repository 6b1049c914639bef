#pragma once

#include <cstdint>
#include <vector>

namespace anyon::fp {

// Dense linear algebra over the prime field F_p. Entries are kept in [0, p).
using Vec = std::vector<int>;

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<int> a;  // row-major

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
  int& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  int at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
  bool operator==(const Mat& o) const = default;
};

int mod(long long v, int p);
int inv_mod(int v, int p);

Mat identity(int n);
Mat mul(const Mat& x, const Mat& y, int p);
Mat add(const Mat& x, const Mat& y, int p);
Mat scale(const Mat& x, int c, int p);
Vec apply(const Mat& m, const Vec& v, int p);
bool is_zero(const Vec& v);

// Row-reduced basis of the span of `vectors`, plus for every basis vector the
// coefficients expressing it through the inputs.
struct SpanBasis {
  std::vector<Vec> basis;
  std::vector<Vec> coeffs;  // coeffs[i][j]: weight of input j in basis[i]
};
SpanBasis span_basis(const std::vector<Vec>& vectors, int p);

// Coordinates of v in the (independent) family `basis`, or empty if v is
// outside the span.
Vec solve_in_span(const std::vector<Vec>& basis, const Vec& v, int p);

// Basis of { x : m x = 0 }.
std::vector<Vec> nullspace(const Mat& m, int p);
int rank(const Mat& m, int p);

}  // namespace anyon::fp
