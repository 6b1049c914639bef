#include "anyon/fp_linalg.h"

#include <stdexcept>

namespace anyon::fp {

int mod(long long v, int p) {
  long long r = v % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int inv_mod(int v, int p) {
  v = mod(v, p);
  if (v == 0) throw std::domain_error("zero has no inverse mod p");
  // extended Euclid
  long long a = v, b = p, x0 = 1, x1 = 0;
  while (b) {
    long long q = a / b;
    std::swap(a -= q * b, b);
    std::swap(x0 -= q * x1, x1);
  }
  return mod(x0, p);
}

Mat identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat mul(const Mat& x, const Mat& y, int p) {
  Mat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      int v = x.at(i, k);
      if (!v) continue;
      for (int j = 0; j < y.cols; ++j) r.at(i, j) = (r.at(i, j) + v * y.at(k, j)) % p;
    }
  return r;
}

Mat add(const Mat& x, const Mat& y, int p) {
  Mat r = x;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = (r.a[i] + y.a[i]) % p;
  return r;
}

Mat scale(const Mat& x, int c, int p) {
  Mat r = x;
  for (auto& v : r.a) v = mod(static_cast<long long>(v) * c, p);
  return r;
}

Vec apply(const Mat& m, const Vec& v, int p) {
  Vec r(m.rows, 0);
  for (int i = 0; i < m.rows; ++i) {
    long long s = 0;
    for (int j = 0; j < m.cols; ++j) s += static_cast<long long>(m.at(i, j)) * v[j];
    r[i] = mod(s, p);
  }
  return r;
}

bool is_zero(const Vec& v) {
  for (int x : v)
    if (x) return false;
  return true;
}

SpanBasis span_basis(const std::vector<Vec>& vectors, int p) {
  SpanBasis out;
  std::vector<int> pivots;
  const std::size_t m = vectors.size();
  for (std::size_t j = 0; j < m; ++j) {
    Vec v = vectors[j];
    Vec c(m, 0);
    c[j] = 1;
    for (std::size_t b = 0; b < out.basis.size(); ++b) {
      int f = v[pivots[b]];
      if (!f) continue;
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = mod(v[k] - static_cast<long long>(f) * out.basis[b][k], p);
      for (std::size_t k = 0; k < m; ++k) c[k] = mod(c[k] - static_cast<long long>(f) * out.coeffs[b][k], p);
    }
    int piv = -1;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k]) {
        piv = static_cast<int>(k);
        break;
      }
    if (piv < 0) continue;
    int s = inv_mod(v[piv], p);
    for (auto& x : v) x = mod(static_cast<long long>(x) * s, p);
    for (auto& x : c) x = mod(static_cast<long long>(x) * s, p);
    // keep earlier rows reduced at the new pivot
    for (std::size_t b = 0; b < out.basis.size(); ++b) {
      int f = out.basis[b][piv];
      if (!f) continue;
      for (std::size_t k = 0; k < v.size(); ++k) out.basis[b][k] = mod(out.basis[b][k] - static_cast<long long>(f) * v[k], p);
      for (std::size_t k = 0; k < m; ++k) out.coeffs[b][k] = mod(out.coeffs[b][k] - static_cast<long long>(f) * c[k], p);
    }
    out.basis.push_back(std::move(v));
    out.coeffs.push_back(std::move(c));
    pivots.push_back(piv);
  }
  return out;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(Mat& m, int p, int col_limit) {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < col_limit && r < m.rows; ++c) {
    int sel = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    for (int k = 0; k < m.cols; ++k) std::swap(m.at(r, k), m.at(sel, k));
    int s = inv_mod(m.at(r, c), p);
    for (int k = 0; k < m.cols; ++k) m.at(r, k) = mod(static_cast<long long>(m.at(r, k)) * s, p);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || !m.at(i, c)) continue;
      int f = m.at(i, c);
      for (int k = 0; k < m.cols; ++k) m.at(i, k) = mod(m.at(i, k) - static_cast<long long>(f) * m.at(r, k), p);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

}  // namespace

Vec solve_in_span(const std::vector<Vec>& basis, const Vec& v, int p) {
  const int n = static_cast<int>(v.size());
  const int k = static_cast<int>(basis.size());
  Mat m(n, k + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) m.at(i, j) = basis[j][i];
    m.at(i, k) = v[i];
  }
  auto piv = rref(m, p, k + 1);
  if (!piv.empty() && piv.back() == k) return {};
  Vec x(k, 0);
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = m.at(static_cast<int>(r), k);
  return x;
}

std::vector<Vec> nullspace(const Mat& m0, int p) {
  Mat m = m0;
  auto piv = rref(m, p, m.cols);
  std::vector<char> is_piv(m.cols, 0);
  for (int c : piv) is_piv[c] = 1;
  std::vector<Vec> out;
  for (int f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    Vec x(m.cols, 0);
    x[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = mod(-m.at(static_cast<int>(r), f), p);
    out.push_back(std::move(x));
  }
  return out;
}

int rank(const Mat& m0, int p) {
  Mat m = m0;
  return static_cast<int>(rref(m, p, m.cols).size());
}

}  // namespace anyon::fp
