#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "anyon/rep_theory.h"

namespace anyon {

namespace {

std::string irrep_label(int dim, int nth) {
  std::string s = std::to_string(dim);
  s += static_cast<char>('a' + nth % 26);
  if (nth >= 26) s += std::to_string(nth / 26);
  return s;
}

// Groups sorted eigenvalues into clusters; returns cluster start offsets.
std::vector<int> clusters(const Eigen::VectorXd& vals, double tol) {
  std::vector<int> starts{0};
  for (int i = 1; i < vals.size(); ++i)
    if (vals[i] - vals[i - 1] > tol) starts.push_back(i);
  starts.push_back(static_cast<int>(vals.size()));
  return starts;
}

std::optional<Irrep> extract(const Group& g, const std::vector<cplx>& chi_by_elem, int d, std::mt19937_64& rng) {
  const int n = static_cast<int>(g.order());
  // isotypic projector of the left regular representation
  CMat p(n, n);
  const double f = static_cast<double>(d) / n;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) p(y, x) = f * std::conj(chi_by_elem[g.mul(y, g.inv(x))]);
  Eigen::SelfAdjointEigenSolver<CMat> pe(p);
  CMat q(n, d * d);
  int col = 0;
  for (int i = 0; i < n; ++i)
    if (pe.eigenvalues()[i] > 0.5) {
      if (col == d * d) return std::nullopt;
      q.col(col++) = pe.eigenvectors().col(i);
    }
  if (col != d * d) return std::nullopt;

  // Hermitian element of the right action; its eigenspaces inside the
  // isotypic block are left-invariant copies of the irrep.
  std::normal_distribution<double> normal;
  CMat t = CMat::Zero(n, n);
  for (int h = 0; h < n; ++h) {
    double c = normal(rng), s = normal(rng);
    for (int x = 0; x < n; ++x) {
      int y = static_cast<int>(g.mul(x, g.inv(h)));  // R_h e_x = e_{x h^-1}
      t(y, x) += cplx(c, s);
      t(x, y) += cplx(c, -s);
    }
  }
  CMat tq = q.adjoint() * t * q;
  Eigen::SelfAdjointEigenSolver<CMat> te(tq);
  const auto& vals = te.eigenvalues();
  double scale = 1.0 + vals.cwiseAbs().maxCoeff();
  auto starts = clusters(vals, 1e-7 * scale);
  for (std::size_t c = 0; c + 1 < starts.size(); ++c)
    if (starts[c + 1] - starts[c] != d) return std::nullopt;
  CMat v = q * te.eigenvectors().middleCols(0, d);

  Irrep r;
  r.dim = d;
  r.matrices.resize(n);
  for (int e = 0; e < n; ++e) {
    CMat m = CMat::Zero(d, d);
    for (int x = 0; x < n; ++x) m += v.row(static_cast<int>(g.mul(e, x))).adjoint() * v.row(x);
    r.matrices[e] = std::move(m);
  }
  if (homomorphism_error(g, r) > 1e-9) return std::nullopt;
  for (int e = 0; e < n; ++e)
    if (std::abs(r.matrices[e].trace() - chi_by_elem[e]) > 1e-8) return std::nullopt;
  return r;
}

}  // namespace

double homomorphism_error(const Group& g, const Irrep& r) {
  double err = 0;
  const CMat id = CMat::Identity(r.dim, r.dim);
  for (Element x = 0; x < g.order(); ++x) {
    err = std::max(err, (r(x) * r(x).adjoint() - id).cwiseAbs().maxCoeff());
    for (Element y = 0; y < g.order(); ++y) err = std::max(err, (r(x) * r(y) - r(g.mul(x, y))).cwiseAbs().maxCoeff());
  }
  return err;
}

std::vector<Irrep> irreps(const Group& g, const CharacterTable& table, std::uint64_t seed) {
  const auto idx = class_index(g, table.classes);
  std::mt19937_64 rng(seed);
  std::vector<Irrep> out;
  std::map<int, int> seen_dim;
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    std::vector<cplx> chi(g.order());
    for (Element x = 0; x < g.order(); ++x) chi[x] = table.rows[row][idx[x]];
    std::optional<Irrep> r;
    for (int attempt = 0; attempt < 16 && !r; ++attempt) r = extract(g, chi, table.dims[row], rng);
    if (!r) throw GroupError("irrep extraction failed verification for row " + std::to_string(row));
    r->label = irrep_label(r->dim, seen_dim[r->dim]++);
    out.push_back(std::move(*r));
  }
  return out;
}

std::vector<Irrep> irreps(const Group& g, std::uint64_t seed) { return irreps(g, character_table(g, seed), seed); }

Irrep semidirect_irrep(const SemidirectSpec& spec, unsigned omega_index) {
  spec.validate();
  if (omega_index < 1 || omega_index >= spec.p) throw GroupError("omega index must lie in [1, p-1]");
  const int q = static_cast<int>(spec.q);
  CMat ra = CMat::Zero(q, q), rb = CMat::Zero(q, q);
  long long tk = 1;
  for (int k = 0; k < q; ++k) {
    ra(k, k) = root_of_unity(static_cast<long long>(omega_index) * tk, spec.p);
    tk = tk * spec.t % spec.p;
    rb(k, (k + 1) % q) = 1.0;
  }
  Irrep r;
  r.label = std::to_string(q) + "d(w^" + std::to_string(omega_index) + ")";
  r.dim = q;
  r.matrices.resize(static_cast<std::size_t>(spec.p) * spec.q);
  for (unsigned k = 0; k < spec.q; ++k) {
    CMat bk = CMat::Identity(q, q);
    for (unsigned s = 0; s < k; ++s) bk = bk * rb;
    CMat ai = CMat::Identity(q, q);
    for (unsigned i = 0; i < spec.p; ++i) {
      r.matrices[sdp_element(spec, i, k)] = ai * bk;
      ai = ai * ra;
    }
  }
  for (unsigned i = 0; i < spec.p; ++i) r.diagonal_on.push_back(sdp_element(spec, i, 0));
  return r;
}

Irrep diagonalize_on_H(const Irrep& r, const Subgroup& abelian, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int d = r.dim;
  for (int attempt = 0; attempt < 16; ++attempt) {
    CMat t = CMat::Zero(d, d);
    for (Element h : abelian) {
      const CMat& m = r(h);
      t += normal(rng) * (m + m.adjoint()) + normal(rng) * cplx(0, 1) * (m - m.adjoint());
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(t);
    const CMat& u = es.eigenvectors();
    Irrep out = r;
    for (auto& m : out.matrices) m = u.adjoint() * m * u;
    bool diag = true;
    for (Element h : abelian) {
      CMat off = out(h);
      off.diagonal().setZero();
      if (off.cwiseAbs().maxCoeff() > 1e-9) diag = false;
    }
    if (!diag) continue;
    for (Element h : abelian) {
      CMat& m = out.matrices[h];
      CMat dm = m.diagonal().asDiagonal();
      m = dm;
    }
    out.diagonal_on = abelian;
    return out;
  }
  throw GroupError("could not diagonalize the representation on the given subgroup");
}

bool OneDimRep::trivial() const {
  return std::all_of(exponent.begin(), exponent.end(), [](unsigned x) { return x == 0; });
}

bool OneDimRep::trivial_on(const Subgroup& s) const {
  return std::all_of(s.begin(), s.end(), [&](Element x) { return exponent[x] == 0; });
}

std::vector<OneDimRep> one_dim_reps(const Group& g) {
  Subgroup derived = commutator_subgroup(g, whole(g), whole(g));
  Quotient q = quotient(g, derived);
  const Group& ab = q.group;
  unsigned e = 1;
  for (Element x = 0; x < ab.order(); ++x) e = std::lcm(e, ab.element_order(x));
  std::vector<Element> gens;
  Subgroup span{0};
  for (Element x = 0; x < ab.order(); ++x)
    if (!contains(span, x)) {
      gens.push_back(x);
      span = closure(ab, gens);
    }

  std::vector<std::vector<unsigned>> found;
  std::vector<unsigned> choice(gens.size(), 0);
  for (;;) {
    std::vector<long> f(ab.order(), -1);
    f[0] = 0;
    std::vector<Element> stack{0};
    bool ok = true;
    while (!stack.empty() && ok) {
      Element x = stack.back();
      stack.pop_back();
      for (std::size_t i = 0; i < gens.size(); ++i) {
        Element y = ab.mul(x, gens[i]);
        long v = (f[x] + static_cast<long>(choice[i] * (e / ab.element_order(gens[i])))) % e;
        if (f[y] < 0) {
          f[y] = v;
          stack.push_back(y);
        } else if (f[y] != v) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      std::vector<unsigned> ex(g.order());
      for (Element x = 0; x < g.order(); ++x) ex[x] = static_cast<unsigned>(f[q.projection[x]]);
      found.push_back(std::move(ex));
    }
    std::size_t i = 0;
    for (; i < gens.size(); ++i) {
      if (++choice[i] < ab.element_order(gens[i])) break;
      choice[i] = 0;
    }
    if (i == gens.size()) break;
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  if (found.size() != ab.order()) throw GroupError("abelianization characters incomplete");

  std::vector<OneDimRep> out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    OneDimRep r;
    r.e = e;
    r.exponent = std::move(found[i]);
    r.label = i == 0 ? "trivial" : "chi" + std::to_string(i);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace anyon
