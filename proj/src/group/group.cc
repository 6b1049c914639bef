#include "anyon/group.h"

#include <numeric>

namespace anyon {

Group Group::from_table(std::string label, const std::vector<std::vector<Element>>& mul) {
  const std::size_t n = mul.size();
  if (n == 0) throw GroupError("empty multiplication table");
  Group g;
  g.label_ = std::move(label);
  g.n_ = n;
  g.table_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (mul[a].size() != n) throw GroupError("multiplication table is not square");
    for (std::size_t b = 0; b < n; ++b) {
      if (mul[a][b] >= n) throw GroupError("multiplication table entry out of range");
      g.table_[a * n + b] = mul[a][b];
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (g.mul(0, a) != a || g.mul(a, 0) != a) throw GroupError("element 0 is not a two-sided identity");
  }
  // Latin square check gives unique inverses.
  std::vector<char> seen(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < n; ++b) {
      Element v = g.mul(a, b);
      if (seen[v]) throw GroupError("multiplication table row is not a permutation");
      seen[v] = 1;
    }
  }
  g.inv_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (g.mul(a, b) == 0) {
        if (g.mul(b, a) != 0) throw GroupError("inverse is not two-sided");
        g.inv_[a] = b;
        break;
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Element ab = g.mul(a, b);
      for (std::size_t c = 0; c < n; ++c)
        if (g.mul(ab, c) != g.mul(a, g.mul(b, c))) throw GroupError("multiplication table is not associative");
    }
  return g;
}

Element Group::pow(Element a, long long k) const {
  if (k < 0) {
    a = inv(a);
    k = -k;
  }
  Element r = 0;
  Element base = a;
  while (k > 0) {
    if (k & 1) r = mul(r, base);
    base = mul(base, base);
    k >>= 1;
  }
  return r;
}

unsigned Group::element_order(Element a) const {
  unsigned k = 1;
  Element x = a;
  while (x != 0) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

std::vector<std::vector<Element>> Group::rows() const {
  std::vector<std::vector<Element>> out(n_, std::vector<Element>(n_));
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b) out[a][b] = mul(a, b);
  return out;
}

}  // namespace anyon
