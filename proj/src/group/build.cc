#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <string>

#include "anyon/group.h"

namespace anyon {

Group cyclic(unsigned n) {
  if (n == 0) throw GroupError("cyclic group of order 0");
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return Group::from_table("Z" + std::to_string(n), t);
}

Group direct_product(const Group& a, const Group& b) {
  const std::size_t na = a.order(), nb = b.order();
  std::vector<std::vector<Element>> t(na * nb, std::vector<Element>(na * nb));
  for (std::size_t x = 0; x < na * nb; ++x)
    for (std::size_t y = 0; y < na * nb; ++y) {
      Element u = a.mul(x % na, y % na);
      Element v = b.mul(x / na, y / na);
      t[x][y] = u + na * v;
    }
  return Group::from_table(a.label() + "x" + b.label(), t);
}

namespace {

bool is_automorphism(const Group& a, const std::vector<Element>& f) {
  if (f.size() != a.order()) return false;
  std::vector<char> hit(a.order());
  for (Element x : f) {
    if (x >= a.order() || hit[x]) return false;
    hit[x] = 1;
  }
  for (Element x = 0; x < a.order(); ++x)
    for (Element y = 0; y < a.order(); ++y)
      if (f[a.mul(x, y)] != a.mul(f[x], f[y])) return false;
  return true;
}

std::vector<Element> compose(const std::vector<Element>& f, const std::vector<Element>& g) {
  std::vector<Element> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[x] = f[g[x]];
  return out;
}

}  // namespace

Group semidirect(const Group& a, const Group& k_group, const std::vector<std::vector<Element>>& action,
                 std::string label) {
  const std::size_t na = a.order(), nk = k_group.order();
  if (action.size() != nk) throw GroupError("action table must have one automorphism per acting element");
  for (const auto& f : action)
    if (!is_automorphism(a, f)) throw GroupError("action is not an automorphism");
  for (Element k1 = 0; k1 < nk; ++k1)
    for (Element k2 = 0; k2 < nk; ++k2)
      if (action[k_group.mul(k1, k2)] != compose(action[k1], action[k2]))
        throw GroupError("action is not a homomorphism into Aut");
  std::vector<std::vector<Element>> t(na * nk, std::vector<Element>(na * nk));
  for (std::size_t x = 0; x < na * nk; ++x)
    for (std::size_t y = 0; y < na * nk; ++y) {
      Element x1 = x % na, k1 = x / na, x2 = y % na, k2 = y / na;
      t[x][y] = a.mul(x1, action[k1][x2]) + na * k_group.mul(k1, k2);
    }
  if (label.empty()) label = a.label() + "xsd" + k_group.label();
  return Group::from_table(label, t);
}

std::vector<std::vector<Element>> extend_action(const Group& a, const Group& k_group,
                                                const std::vector<Element>& k_generators,
                                                const std::vector<std::vector<Element>>& images) {
  if (k_generators.size() != images.size()) throw GroupError("one image per generator required");
  for (const auto& f : images)
    if (!is_automorphism(a, f)) throw GroupError("generator image is not an automorphism");
  std::vector<Element> id(a.order());
  for (Element x = 0; x < a.order(); ++x) id[x] = x;
  std::vector<std::vector<Element>> act(k_group.order());
  act[0] = id;
  std::vector<Element> frontier{0};
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (Element g : frontier)
      for (std::size_t s = 0; s < k_generators.size(); ++s) {
        Element h = k_group.mul(g, k_generators[s]);
        auto f = compose(act[g], images[s]);
        if (act[h].empty()) {
          act[h] = std::move(f);
          next.push_back(h);
        } else if (act[h] != f) {
          throw GroupError("generator images do not define a homomorphism");
        }
      }
    frontier = std::move(next);
  }
  for (const auto& f : act)
    if (f.empty()) throw GroupError("generators do not generate the acting group");
  return act;
}

Group permutation_group(const std::vector<std::vector<unsigned>>& generators, std::string label) {
  if (generators.empty()) return cyclic(1);
  const std::size_t m = generators[0].size();
  std::vector<unsigned> id(m);
  for (unsigned i = 0; i < m; ++i) id[i] = i;
  for (const auto& g : generators) {
    if (g.size() != m) throw GroupError("generators act on different point sets");
    auto s = g;
    std::sort(s.begin(), s.end());
    if (s != id) throw GroupError("generator is not a permutation");
  }
  auto mul = [m](const std::vector<unsigned>& s, const std::vector<unsigned>& t) {
    std::vector<unsigned> r(m);
    for (std::size_t x = 0; x < m; ++x) r[x] = s[t[x]];
    return r;
  };
  std::vector<std::vector<unsigned>> elems{id};
  std::map<std::vector<unsigned>, Element> index{{id, 0}};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto& g : generators) {
      auto h = mul(elems[i], g);
      if (!index.count(h)) {
        index.emplace(h, static_cast<Element>(elems.size()));
        elems.push_back(std::move(h));
      }
    }
  const std::size_t n = elems.size();
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) t[x][y] = index.at(mul(elems[x], elems[y]));
  return Group::from_table(label.empty() ? "Perm" + std::to_string(n) : label, t);
}

void SemidirectSpec::validate() const {
  auto prime = [](unsigned v) {
    if (v < 2) return false;
    for (unsigned d = 2; d * d <= v; ++d)
      if (v % d == 0) return false;
    return true;
  };
  if (!prime(p) || !prime(q)) throw GroupError("p and q must be prime");
  if (p == q) throw GroupError("p and q must differ");
  if (t <= 1 || t >= p) throw GroupError("t must lie in (1, p)");
  unsigned long long r = 1;
  for (unsigned i = 0; i < q; ++i) r = r * t % p;
  if (r != 1) throw GroupError("t^q is not 1 mod p");
}

std::vector<SemidirectSpec> semidirect_specs(unsigned max_p) {
  std::vector<SemidirectSpec> out;
  for (unsigned p = 3; p <= max_p; ++p)
    for (unsigned q = 2; q < p; ++q)
      for (unsigned t = 2; t < p; ++t) {
        SemidirectSpec s{p, q, t};
        try {
          s.validate();
        } catch (const GroupError&) {
          continue;
        }
        out.push_back(s);
      }
  return out;
}

Group semidirect_pq(const SemidirectSpec& spec) {
  spec.validate();
  Group zp = cyclic(spec.p), zq = cyclic(spec.q);
  std::vector<std::vector<Element>> act(spec.q, std::vector<Element>(spec.p));
  unsigned long long tk = 1;
  for (unsigned k = 0; k < spec.q; ++k) {
    for (unsigned i = 0; i < spec.p; ++i) act[k][i] = static_cast<Element>(i * tk % spec.p);
    tk = tk * spec.t % spec.p;
  }
  return semidirect(zp, zq, act,
                    "Z" + std::to_string(spec.p) + "xsd(t=" + std::to_string(spec.t) + ")Z" + std::to_string(spec.q));
}

namespace {

std::vector<unsigned> cycle_perm(unsigned m, const std::vector<unsigned>& cyc) {
  std::vector<unsigned> r(m);
  for (unsigned i = 0; i < m; ++i) r[i] = i;
  for (std::size_t i = 0; i < cyc.size(); ++i) r[cyc[i]] = cyc[(i + 1) % cyc.size()];
  return r;
}

// Linear map on Z_p^2 (index x + p*y) given by (x, y) -> (m00 x + m01 y, m10 x + m11 y).
std::vector<Element> linear2(unsigned p, int m00, int m01, int m10, int m11) {
  std::vector<Element> f(p * p);
  auto md = [p](int v) { return static_cast<unsigned>(((v % (int)p) + (int)p) % (int)p); };
  for (unsigned y = 0; y < p; ++y)
    for (unsigned x = 0; x < p; ++x) f[x + p * y] = md(m00 * (int)x + m01 * (int)y) + p * md(m10 * (int)x + m11 * (int)y);
  return f;
}

}  // namespace

Group symmetric(unsigned n) {
  if (n <= 1) return cyclic(1);
  std::vector<unsigned> all(n);
  for (unsigned i = 0; i < n; ++i) all[i] = i;
  std::vector<std::vector<unsigned>> gens{cycle_perm(n, {0, 1})};
  if (n > 2) gens.push_back(cycle_perm(n, all));
  return permutation_group(gens, "S" + std::to_string(n));
}

Group alternating(unsigned n) {
  if (n < 3) return cyclic(1);
  std::vector<unsigned> big;
  for (unsigned i = (n % 2 == 1) ? 0 : 1; i < n; ++i) big.push_back(i);
  return permutation_group({cycle_perm(n, {0, 1, 2}), cycle_perm(n, big)}, "A" + std::to_string(n));
}

Group dihedral(unsigned n) {
  if (n < 1) throw GroupError("dihedral group needs n >= 1");
  Group zn = cyclic(n), z2 = cyclic(2);
  std::vector<std::vector<Element>> act(2, std::vector<Element>(n));
  for (unsigned i = 0; i < n; ++i) {
    act[0][i] = i;
    act[1][i] = (n - i) % n;
  }
  return semidirect(zn, z2, act, "D" + std::to_string(n));
}

Group quaternion() {
  // unit products: u*v = sign * unit
  static const std::array<std::array<std::pair<int, int>, 4>, 4> kUnit = {{
      {{{0, 0}, {1, 0}, {2, 0}, {3, 0}}},
      {{{1, 0}, {0, 1}, {3, 0}, {2, 1}}},
      {{{2, 0}, {3, 1}, {0, 1}, {1, 0}}},
      {{{3, 0}, {2, 0}, {1, 1}, {0, 1}}},
  }};
  std::vector<std::vector<Element>> t(8, std::vector<Element>(8));
  for (unsigned x = 0; x < 8; ++x)
    for (unsigned y = 0; y < 8; ++y) {
      auto [w, s] = kUnit[x / 2][y / 2];
      t[x][y] = 2 * w + ((x % 2) ^ (y % 2) ^ s);
    }
  return Group::from_table("Q8", t);
}

namespace {

struct Fixture {
  Group group;
  NamedGenerators gens;
};

Fixture build_fixture(const std::string& name) {
  if (name == "a4") {
    Group v = direct_product(cyclic(2), cyclic(2));
    Group z3 = cyclic(3);
    // b: a1^i a2^j -> a1^j a2^(i+j)
    auto act = extend_action(v, z3, {1}, {linear2(2, 0, 1, 1, 1)});
    Group g = semidirect(v, z3, act, "a4");
    return {g, {{1, 2}, {4}}};
  }
  if (name == "z3z3_z3z2") {
    Group a = direct_product(cyclic(3), cyclic(3));
    Group k = direct_product(cyclic(3), cyclic(2));
    // x: (i, j) -> (-j, i - j); b: (i, j) -> (-i, -j)
    auto act = extend_action(a, k, {1, 3}, {linear2(3, 0, -1, 1, -1), linear2(3, -1, 0, 0, -1)});
    Group g = semidirect(a, k, act, "z3z3_z3z2");
    return {g, {{1, 3}, {9 * 1, 9 * 3}}};
  }
  if (name == "z3z3_q8") {
    Group a = direct_product(cyclic(3), cyclic(3));
    Group k = quaternion();
    // i: (x, y) -> (y, -x); j: (x, y) -> (x + y, x - y)
    auto act = extend_action(a, k, {2, 4}, {linear2(3, 0, 1, -1, 0), linear2(3, 1, 1, 1, -1)});
    Group g = semidirect(a, k, act, "z3z3_q8");
    return {g, {{1, 3}, {9 * 2, 9 * 4}}};
  }
  if (name == "z3z3_d4") {
    Group a = direct_product(cyclic(3), cyclic(3));
    Group k = dihedral(4);
    // beta: (x, y) -> (y, -x); gamma: (x, y) -> (y, x)
    auto act = extend_action(a, k, {1, 4}, {linear2(3, 0, 1, -1, 0), linear2(3, 0, 1, 1, 0)});
    Group g = semidirect(a, k, act, "z3z3_d4");
    return {g, {{1, 3}, {9 * 1, 9 * 4}}};
  }
  throw GroupError("unknown named group '" + name + "'");
}

}  // namespace

Group named_group(const std::string& name) { return build_fixture(name).group; }

NamedGenerators named_generators(const std::string& name) { return build_fixture(name).gens; }

std::vector<std::string> named_groups() { return {"a4", "z3z3_d4", "z3z3_q8", "z3z3_z3z2"}; }

}  // namespace anyon
