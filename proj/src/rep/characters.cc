#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "anyon/rep_theory.h"

namespace anyon {

cplx root_of_unity(long long k, long long n) {
  long long r = ((k % n) + n) % n;
  // exact values on the axes keep the small tables free of 1e-17 noise
  if (r == 0) return {1.0, 0.0};
  if (2 * r == n) return {-1.0, 0.0};
  if (4 * r == n) return {0.0, 1.0};
  if (4 * r == 3 * n) return {0.0, -1.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
}

namespace {

struct ValueKey {
  long long phase;
  long long mag;
  auto operator<=>(const ValueKey&) const = default;
};

ValueKey key_of(cplx v) {
  double m = std::abs(v);
  if (m < 1e-8) return {0, 0};
  double ph = std::arg(v);
  if (ph < 0) ph += 2 * std::numbers::pi;
  long long q = std::llround(ph * 1e8);
  if (q >= std::llround(2 * std::numbers::pi * 1e8)) q = 0;
  return {q, std::llround(m * 1e8)};
}

}  // namespace

CharacterTable character_table(const Group& g, std::uint64_t seed) {
  CharacterTable t;
  t.classes = conjugacy_classes(g);
  const auto idx = class_index(g, t.classes);
  const int k = static_cast<int>(t.classes.size());
  const double order = static_cast<double>(g.order());

  // c[r][s][t] = #{(x, y) in C_r x C_s : x y = g_t}
  std::vector<Eigen::MatrixXd> a(k, Eigen::MatrixXd::Zero(k, k));
  for (int tc = 0; tc < k; ++tc) {
    Element gt = t.classes[tc].representative;
    for (Element x = 0; x < g.order(); ++x) {
      Element y = g.mul(g.inv(x), gt);
      a[idx[x]](idx[y], tc) += 1.0;
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt < 32; ++attempt) {
    Eigen::MatrixXd comb = Eigen::MatrixXd::Zero(k, k);
    for (int r = 0; r < k; ++r) comb += normal(rng) * a[r];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comb);
    if (es.info() != Eigen::Success) continue;
    auto vals = es.eigenvalues();
    double scale = 1.0 + vals.cwiseAbs().maxCoeff();
    bool separated = true;
    for (int i = 0; i < k && separated; ++i)
      for (int j = i + 1; j < k; ++j)
        if (std::abs(vals[i] - vals[j]) < 1e-6 * scale) {
          separated = false;
          break;
        }
    if (!separated) continue;

    std::vector<std::vector<cplx>> rows;
    std::vector<int> dims;
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      Eigen::VectorXcd w = es.eigenvectors().col(i);
      if (std::abs(w[0]) < 1e-12) {
        ok = false;
        break;
      }
      w /= w[0];
      double s = 0;
      for (int r = 0; r < k; ++r) s += std::norm(w[r]) / static_cast<double>(t.classes[r].members.size());
      double d = std::sqrt(order / s);
      int di = static_cast<int>(std::lround(d));
      if (std::abs(d - di) > 1e-6) ok = false;
      std::vector<cplx> row(k);
      for (int r = 0; r < k; ++r) row[r] = w[r] * static_cast<double>(di) / static_cast<double>(t.classes[r].members.size());
      rows.push_back(std::move(row));
      dims.push_back(di);
    }
    if (!ok) continue;

    // row orthonormality
    for (int i = 0; i < k && ok; ++i)
      for (int j = 0; j < k && ok; ++j) {
        cplx ip = 0;
        for (int r = 0; r < k; ++r)
          ip += static_cast<double>(t.classes[r].members.size()) * std::conj(rows[i][r]) * rows[j][r];
        ip /= order;
        if (std::abs(ip - (i == j ? 1.0 : 0.0)) > 1e-9) ok = false;
      }
    if (!ok) continue;

    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](int x, int y) {
      if (dims[x] != dims[y]) return dims[x] < dims[y];
      for (int r = 0; r < k; ++r) {
        auto kx = key_of(rows[x][r]), ky = key_of(rows[y][r]);
        if (kx != ky) return kx < ky;
      }
      return false;
    });
    for (int i : perm) {
      t.rows.push_back(rows[i]);
      t.dims.push_back(dims[i]);
    }
    return t;
  }
  throw GroupError("character table: degenerate class-sum spectrum after retries");
}

}  // namespace anyon
