#include "anyon/decomposition.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace anyon {

fp::Vec ElementaryAbelian::coords(Element h) const {
  auto it = code_of.find(h);
  if (it == code_of.end()) throw GroupError("element outside the elementary abelian subgroup");
  fp::Vec v(n);
  int c = it->second;
  for (int k = 0; k < n; ++k) {
    v[k] = c % p;
    c /= p;
  }
  return v;
}

Element ElementaryAbelian::element(const fp::Vec& v) const {
  int c = 0;
  for (int k = n - 1; k >= 0; --k) c = c * p + fp::mod(v[k], p);
  return by_code[c];
}

ElementaryAbelian make_elementary_abelian(const Group& g, const Subgroup& h) {
  for (Element x : h)
    for (Element y : h)
      if (!g.commute(x, y)) throw GroupError("subgroup is not abelian");
  ElementaryAbelian e;
  if (h.size() < 2) throw GroupError("elementary abelian subgroup must be non-trivial");
  e.p = static_cast<int>(g.element_order(h[1]));
  for (Element x : h)
    if (x != 0 && static_cast<int>(g.element_order(x)) != e.p) throw GroupError("subgroup is not elementary abelian");
  for (int d = 2; d * d <= e.p; ++d)
    if (e.p % d == 0) throw GroupError("subgroup exponent is not prime");
  Subgroup span{0};
  for (Element x : h) {
    if (contains(span, x)) continue;
    e.generators.push_back(x);
    span = closure(g, e.generators);
  }
  e.n = static_cast<int>(e.generators.size());
  int total = 1;
  for (int k = 0; k < e.n; ++k) total *= e.p;
  if (total != static_cast<int>(h.size())) throw GroupError("subgroup is not elementary abelian");
  e.by_code.resize(total);
  for (int c = 0; c < total; ++c) {
    Element x = 0;
    int r = c;
    for (int k = 0; k < e.n; ++k) {
      x = g.mul(x, g.pow(e.generators[k], r % e.p));
      r /= e.p;
    }
    e.by_code[c] = x;
    e.code_of[x] = c;
  }
  return e;
}

std::vector<fp::Mat> conjugation_matrices(const Group& gt, const ElementaryAbelian& h) {
  std::vector<fp::Mat> out(gt.order());
  for (Element g = 0; g < gt.order(); ++g) {
    fp::Mat m(h.n, h.n);
    for (int k = 0; k < h.n; ++k) {
      auto col = h.coords(gt.conj(g, h.generators[k]));
      for (int r = 0; r < h.n; ++r) m.at(r, k) = col[r];
    }
    out[g] = std::move(m);
  }
  return out;
}

ConjWord AlgebraWitness::word() const {
  std::vector<ConjWord> f;
  for (const auto& [g, c] : coeff) {
    ConjWord x = g == 0 ? ConjWord::arg(0) : ConjWord::arg(0).conjugated_by(g);
    for (int i = 0; i < c; ++i) f.push_back(x);
  }
  return ConjWord::product(std::move(f));
}

namespace {

fp::Vec flatten(const fp::Mat& m) { return m.a; }

fp::Mat unflatten(const fp::Vec& v, int n) {
  fp::Mat m(n, n);
  m.a = v;
  return m;
}

AlgebraWitness combine(const std::vector<AlgebraWitness>& ws, const fp::Vec& c, int p) {
  AlgebraWitness out;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (!c[i]) continue;
    for (const auto& [g, k] : ws[i].coeff) out.coeff[g] = fp::mod(out.coeff[g] + static_cast<long long>(k) * c[i], p);
  }
  for (auto it = out.coeff.begin(); it != out.coeff.end();)
    it = it->second == 0 ? out.coeff.erase(it) : std::next(it);
  return out;
}

Subgroup lambda_from_killers(const Decomposition& dec, const std::vector<fp::Mat>& killers) {
  const auto& hs = dec.hspace;
  const int n = hs.n, p = hs.p;
  if (killers.empty()) {
    Subgroup all = dec.H_tilde;
    return all;
  }
  fp::Mat stacked(static_cast<int>(killers.size()) * n, n);
  for (std::size_t k = 0; k < killers.size(); ++k)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) stacked.at(static_cast<int>(k) * n + r, c) = killers[k].at(r, c);
  auto basis = fp::nullspace(stacked, p);
  std::set<Element> elems;
  const int dim = static_cast<int>(basis.size());
  int count = 1;
  for (int i = 0; i < dim; ++i) count *= p;
  for (int code = 0; code < count; ++code) {
    fp::Vec v(n, 0);
    int r = code;
    for (int i = 0; i < dim; ++i) {
      int c = r % p;
      r /= p;
      for (int k = 0; k < n; ++k) v[k] = fp::mod(v[k] + static_cast<long long>(c) * basis[i][k], p);
    }
    elems.insert(hs.element(v));
  }
  return Subgroup(elems.begin(), elems.end());
}

}  // namespace

LambdaData compute_lambda(const Decomposition& dec, Element a) {
  const auto& hs = dec.hspace;
  const int n = hs.n, p = hs.p;
  if (a == 0 || !contains(dec.H_tilde, a)) throw GroupError("compute_lambda needs a non-trivial element of H~");
  LambdaData out;
  out.a = a;

  // span of the conjugation matrices, then closure under products
  std::vector<fp::Vec> gens;
  std::vector<Element> gen_elem;
  for (Element g = 0; g < dec.rho.size(); ++g) {
    gens.push_back(flatten(dec.rho[g]));
    gen_elem.push_back(g);
  }
  auto sb = fp::span_basis(gens, p);
  for (std::size_t i = 0; i < sb.basis.size(); ++i) {
    out.algebra_basis.push_back(unflatten(sb.basis[i], n));
    AlgebraWitness w;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (sb.coeffs[i][j]) w.coeff[gen_elem[j]] = fp::mod(w.coeff[gen_elem[j]] + sb.coeffs[i][j], p);
    out.algebra_witness.push_back(w);
  }
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<fp::Vec> flat;
    for (const auto& m : out.algebra_basis) flat.push_back(flatten(m));
    const std::size_t dim = out.algebra_basis.size();
    for (std::size_t i = 0; i < dim && !grew; ++i)
      for (std::size_t j = 0; j < dim && !grew; ++j) {
        fp::Mat prod = fp::mul(out.algebra_basis[i], out.algebra_basis[j], p);
        if (!fp::solve_in_span(flat, flatten(prod), p).empty()) continue;
        AlgebraWitness w;
        for (const auto& [g, c] : out.algebra_witness[i].coeff)
          for (const auto& [h, d] : out.algebra_witness[j].coeff) {
            Element gh = dec.Gt().mul(g, h);
            w.coeff[gh] = fp::mod(w.coeff[gh] + static_cast<long long>(c) * d, p);
          }
        out.algebra_basis.push_back(prod);
        out.algebra_witness.push_back(w);
        grew = true;
      }
  }

  // { M in A : M a = 0 }
  const fp::Vec av = hs.coords(a);
  const int dim = static_cast<int>(out.algebra_basis.size());
  fp::Mat sys(n, dim);
  for (int i = 0; i < dim; ++i) {
    auto col = fp::apply(out.algebra_basis[i], av, p);
    for (int r = 0; r < n; ++r) sys.at(r, i) = col[r];
  }
  for (const auto& c : fp::nullspace(sys, p)) {
    fp::Mat m(n, n);
    for (int i = 0; i < dim; ++i)
      if (c[i]) m = fp::add(m, fp::scale(out.algebra_basis[i], c[i], p), p);
    out.killers.push_back(m);
    out.killer_witness.push_back(combine(out.algebra_witness, c, p));
  }
  out.lambda = lambda_from_killers(dec, out.killers);
  return out;
}

std::vector<BalancedMap> balanced_maps(const Decomposition& dec, const Subgroup& lambda, Element a,
                                       std::size_t enumeration_bound) {
  const auto& hs = dec.hspace;
  const int n = hs.n, p = hs.p;
  // Breadth-first search over sums of conjugation matrices gives each
  // algebra element together with a shortest product-of-conjugates witness.
  std::vector<std::pair<fp::Mat, Element>> steps;
  {
    std::set<std::vector<int>> seen;
    for (Element g = 0; g < dec.rho.size(); ++g)
      if (seen.insert(dec.rho[g].a).second) steps.emplace_back(dec.rho[g], g);
  }
  struct NodeInfo {
    fp::Mat m;
    AlgebraWitness w;
  };
  std::vector<NodeInfo> nodes{{fp::Mat(n, n), {}}};
  std::map<std::vector<int>, std::size_t> index{{nodes[0].m.a, 0}};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& [m, g] : steps) {
      fp::Mat next = fp::add(nodes[i].m, m, p);
      if (index.count(next.a)) continue;
      if (nodes.size() >= enumeration_bound) throw GroupError("algebra enumeration bound exceeded");
      AlgebraWitness w = nodes[i].w;
      w.coeff[g] = fp::mod(w.coeff[g] + 1, p);
      if (w.coeff[g] == 0) w.coeff.erase(g);
      index.emplace(next.a, nodes.size());
      nodes.push_back({next, w});
    }
  }

  const fp::Vec av = hs.coords(a);
  std::vector<BalancedMap> out;
  std::set<std::vector<Element>> restrictions;
  for (const auto& node : nodes) {
    Element img = hs.element(fp::apply(node.m, av, p));
    if (img == 0 || !contains(lambda, img)) continue;
    std::vector<Element> key;
    for (Element l : lambda) key.push_back(hs.element(fp::apply(node.m, hs.coords(l), p)));
    if (!restrictions.insert(key).second) continue;
    for (std::size_t i = 1; i < lambda.size(); ++i)
      if (key[i] == 0 || !contains(lambda, key[i])) throw GroupError("balanced map does not restrict to an automorphism");
    out.push_back({node.m, node.w, node.w.word()});
  }
  if (out.empty()) throw GroupError("empty balanced map set");
  if (!is_balanced(dec, out, lambda)) throw GroupError("map set fails the balance condition");
  return out;
}

std::vector<std::vector<int>> balance_counts(const Decomposition& dec, const std::vector<BalancedMap>& maps,
                                             const Subgroup& lambda) {
  const auto& hs = dec.hspace;
  std::vector<std::vector<int>> counts(lambda.size(), std::vector<int>(lambda.size(), 0));
  for (const auto& m : maps)
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      Element img = hs.element(fp::apply(m.matrix, hs.coords(lambda[i]), hs.p));
      auto j = std::lower_bound(lambda.begin(), lambda.end(), img) - lambda.begin();
      if (j < static_cast<long>(lambda.size()) && lambda[j] == img) counts[i][j]++;
    }
  return counts;
}

bool is_balanced(const Decomposition& dec, const std::vector<BalancedMap>& maps, const Subgroup& lambda) {
  auto counts = balance_counts(dec, maps, lambda);
  // lambda[0] is the identity
  for (std::size_t j = 1; j < lambda.size(); ++j)
    for (std::size_t i = 2; i < lambda.size(); ++i)
      if (counts[i][j] != counts[1][j]) return false;
  for (std::size_t i = 1; i < lambda.size(); ++i)
    if (counts[i][0] != 0) return false;
  return true;
}

namespace {

std::vector<unsigned> prime_factors(std::size_t v) {
  std::vector<unsigned> out;
  for (unsigned d = 2; d * d <= v; ++d)
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  if (v > 1) out.push_back(static_cast<unsigned>(v));
  return out;
}

bool is_power_of(unsigned v, unsigned q) {
  while (v % q == 0) v /= q;
  return v == 1;
}

}  // namespace

Decomposition decompose(const Group& g) {
  auto cls = classify(g);
  if (!cls.solvable || cls.nilpotent) throw GroupError("decompose requires a solvable, non-nilpotent group");
  Decomposition d;
  d.G = g;
  d.H = series(g, SeriesKind::kExhaustive).limit;

  // N: maximal among normal subgroups of G properly inside H
  std::vector<Subgroup> cands;
  for (auto& s : normal_subgroups(g))
    if (s.size() < d.H.size() && std::includes(d.H.begin(), d.H.end(), s.begin(), s.end())) cands.push_back(s);
  std::vector<Subgroup> maximal;
  for (const auto& s : cands) {
    bool covered = false;
    for (const auto& t : cands)
      if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) covered = true;
    if (!covered) maximal.push_back(s);
  }
  std::sort(maximal.begin(), maximal.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  d.N = maximal.front();
  d.quo = quotient(g, d.N);
  const Group& gt = d.quo.group;

  std::set<Element> ht;
  for (Element h : d.H) ht.insert(d.quo.projection[h]);
  d.H_tilde.assign(ht.begin(), ht.end());
  d.hspace = make_elementary_abelian(gt, d.H_tilde);

  // Sylow factor of the nilpotent quotient G~/H~
  auto order_mod_h = [&](Element x) {
    unsigned m = 1;
    Element y = x;
    while (!contains(d.H_tilde, y)) {
      y = gt.mul(y, x);
      ++m;
    }
    return m;
  };
  bool found_q = false;
  for (unsigned q : prime_factors(gt.order() / d.H_tilde.size())) {
    Subgroup hk;
    for (Element x = 0; x < gt.order(); ++x)
      if (is_power_of(order_mod_h(x), q)) hk.push_back(x);
    if (!is_subgroup(gt, hk)) throw GroupError("Sylow preimage is not a subgroup; quotient not nilpotent");
    if (commutator_subgroup(gt, hk, d.H_tilde) == d.H_tilde) {
      d.q = q;
      d.HK = hk;
      found_q = true;
      break;
    }
  }
  if (!found_q) throw GroupError("no Sylow factor acts fixed-point freely on H~");
  d.X = centralizer(gt, d.H_tilde, d.HK);

  auto bijective_commutator = [&](Element x) {
    std::set<Element> img;
    for (Element h : d.H_tilde) img.insert(gt.comm(x, h));
    return img.size() == d.H_tilde.size() && std::includes(d.H_tilde.begin(), d.H_tilde.end(), img.begin(), img.end());
  };
  bool found_b = false;
  for (Element x : d.HK) {
    if (contains(d.X, x)) continue;
    bool central = true;
    for (Element y : d.HK)
      if (!contains(d.X, gt.comm(x, y))) {
        central = false;
        break;
      }
    if (central && bijective_commutator(x)) {
      d.b = x;
      found_b = true;
      break;
    }
  }
  if (!found_b) throw GroupError("no element b with [b, H~] = H~ found");
  d.S_tilde = centralizer(gt, d.H_tilde, whole(gt));

  // period of psi(h) = [h, b]
  unsigned l = 1;
  for (Element h : d.H_tilde) {
    unsigned len = 1;
    for (Element y = gt.comm(h, d.b); y != h; y = gt.comm(y, d.b)) ++len;
    l = std::lcm(l, len);
  }
  d.period_l = l;
  auto ex = series(gt, SeriesKind::kExhaustive);
  for (std::size_t j = 0; j < ex.chain.size(); ++j)
    if (ex.chain[j] == d.H_tilde) {
      d.exhaustive_depth = static_cast<unsigned>(j);
      break;
    }
  if (ex.limit != d.H_tilde) throw GroupError("H~ is not the exhaustive-commutator limit of G~");

  d.rho = conjugation_matrices(gt, d.hspace);
  // Iterate a -> first non-trivial element of Lambda(a) until it is stable.
  Element a = d.H_tilde[1];
  for (;;) {
    d.lam = compute_lambda(d, a);
    Element first = d.lam.lambda.at(1);
    if (first == a) break;
    a = first;
  }
  d.a_star = a;
  d.phi_set = balanced_maps(d, d.lam.lambda, d.a_star);

  // invariants
  if (gt.order() / d.S_tilde.size() % d.p() == 0) throw GroupError("p divides |G~/S~|");
  for (Element h : d.H_tilde)
    if (h != 0 && normal_closure(gt, h) != d.H_tilde) throw GroupError("H~ has a proper non-trivial normal subgroup");
  if (!bijective_commutator(d.b)) throw GroupError("[b, .] is not a bijection of H~");
  return d;
}

}  // namespace anyon
