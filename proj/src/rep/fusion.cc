#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "anyon/rep_theory.h"

namespace anyon {

cplx FusionAmplitudeTable::at(unsigned key, unsigned gamma_index) const {
  for (const auto& e : entries)
    if (e.key == key && e.gamma == gamma_index) return e.value;
  throw GroupError("fusion table has no entry for the requested key");
}

std::string FusionAmplitudeTable::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "key,gamma,re,im,magnitude2\n";
  for (const auto& e : entries)
    os << e.key << ',' << e.gamma << ',' << e.value.real() << ',' << e.value.imag() << ',' << std::norm(e.value)
       << '\n';
  return os.str();
}

std::string FusionAmplitudeTable::to_json() const {
  nlohmann::json j;
  j["rep"] = rep;
  j["gamma"] = gamma;
  j["phase_convention"] = phase_convention;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries)
    j["entries"].push_back({{"key", e.key}, {"gamma", e.gamma}, {"re", e.value.real()}, {"im", e.value.imag()},
                            {"magnitude2", std::norm(e.value)}});
  return j.dump(2);
}

FusionAmplitudeTable fusion_F_semidirect(const SemidirectSpec& spec, unsigned omega_index) {
  spec.validate();
  if (omega_index < 1 || omega_index >= spec.p) throw GroupError("omega index must lie in [1, p-1]");
  FusionAmplitudeTable t;
  t.rep = std::to_string(spec.q) + "d(w^" + std::to_string(omega_index) + ")";
  t.gamma = "b->gamma^j, gamma=e^(2 pi i/q)";
  t.phase_convention = "|[gamma^j]> = diag(gamma^j, gamma^2j, ..., gamma^qj)";
  for (unsigned i = 0; i < spec.p; ++i)
    for (unsigned j = 0; j < spec.q; ++j) {
      cplx s = 0;
      long long tk = 1;  // t^{k-1}
      for (unsigned k = 1; k <= spec.q; ++k) {
        s += root_of_unity(-static_cast<long long>(k) * j, spec.q) *
             root_of_unity(static_cast<long long>(omega_index) * i * tk, spec.p);
        tk = tk * spec.t % spec.p;
      }
      s /= static_cast<double>(spec.q);
      if (std::abs(s.real()) < 1e-15) s.real(0);
      if (std::abs(s.imag()) < 1e-15) s.imag(0);
      t.entries.push_back({i, j, s});
    }
  return t;
}

int gamma_multiplicity(const Group& g, const Irrep& r, const OneDimRep& gamma) {
  cplx s = 0;
  for (Element x = 0; x < g.order(); ++x) s += std::norm(r.character(x)) * std::conj(gamma(x));
  s /= static_cast<double>(g.order());
  return static_cast<int>(std::lround(s.real()));
}

ChargeFusion::ChargeFusion(const Group& g, const Irrep& r, const OneDimRep& gamma) : r_(&r) {
  const int d = r.dim, dd = d * d;
  // P_gamma on row-major vec(M): M -> (1/|G|) sum_g conj(gamma(g)) R(g) M R(g)^dag
  CMat s = CMat::Zero(dd, dd);
  for (Element x = 0; x < g.order(); ++x) {
    const CMat& m = r(x);
    const cplx w = std::conj(gamma(x)) / static_cast<double>(g.order());
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) s(i * d + j, k * d + l) += w * m(i, k) * std::conj(m(j, l));
  }
  double rank = s.trace().real();
  if (std::abs(rank - 1.0) > 1e-6) throw GroupError("gamma sector of R x R* is not one-dimensional");
  int best = 0;
  for (int c = 1; c < dd; ++c)
    if (s.col(c).norm() > s.col(best).norm()) best = c;
  Eigen::VectorXcd v = s.col(best);
  v *= std::sqrt(static_cast<double>(d)) / v.norm();
  for (int i = 0; i < dd; ++i)
    if (std::abs(v[i]) > 1e-9) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      break;
    }
  v_ = CMat(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v_(i, j) = v[i * d + j];
}

cplx ChargeFusion::amplitude(const CMat& m) const {
  return (v_.adjoint() * m).trace() / static_cast<double>(r_->dim);
}

cplx fusion_F_general(const Group& g, const Irrep& r, const OneDimRep& gamma, Element h) {
  if (gamma_multiplicity(g, r, gamma) != 1) throw GroupError("gamma must occur exactly once in R x R*");
  return ChargeFusion(g, r, gamma).F(h);
}

FusionAmplitudeTable fusion_table_general(const Group& g, const Irrep& r, const OneDimRep& gamma,
                                          const Subgroup& elements) {
  if (gamma_multiplicity(g, r, gamma) != 1) throw GroupError("gamma must occur exactly once in R x R*");
  ChargeFusion cf(g, r, gamma);
  FusionAmplitudeTable t;
  t.rep = r.label;
  t.gamma = gamma.label;
  t.phase_convention = "invariant vector unit in Tr(A^dag B)/d, first non-zero row-major entry real positive";
  for (Element h : elements) t.entries.push_back({h, 0, cf.F(h)});
  return t;
}

double fusion_norm_diagonal(const Group& g, const Irrep& r, const OneDimRep& gamma, Element h) {
  if (!contains(r.diagonal_on, h)) throw GroupError("representation is not diagonal on h");
  double total = 0;
  for (int i = 0; i < r.dim; ++i) {
    cplx s = 0;
    for (Element x = 0; x < g.order(); ++x) {
      Element c = g.conj(x, h);
      if (!contains(r.diagonal_on, c)) throw GroupError("diagonal subgroup is not normal");
      s += std::conj(gamma(x)) * r(c)(i, i);
    }
    total += std::norm(s);
  }
  const double n = static_cast<double>(g.order());
  return total / (r.dim * n * n);
}

double vacuum_amplitude(const Group& g, const Irrep& r, Element h) {
  if (r.diagonal_on.empty()) throw GroupError("vacuum_amplitude needs diagonal characters");
  Subgroup cls;
  for (Element x = 0; x < g.order(); ++x) cls.push_back(g.conj(x, h));
  std::sort(cls.begin(), cls.end());
  cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
  double total = 0;
  for (int i = 0; i < r.dim; ++i) {
    cplx s = 0;
    for (Element c : cls) {
      if (!contains(r.diagonal_on, c)) throw GroupError("representation is not diagonal on the class of h");
      s += r(c)(i, i);
    }
    total += std::norm(s);
  }
  const double c = static_cast<double>(cls.size());
  return total / (r.dim * c * c);
}

ChargePair select_charge_pair(const Decomposition& dec, double tolerance) {
  const Group& gt = dec.Gt();
  auto reps = irreps(gt);
  auto gammas = one_dim_reps(gt);
  ChargePair out;
  for (std::size_t ri = 0; ri < reps.size(); ++ri) {
    if (reps[ri].dim < 2) continue;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      const auto& gm = gammas[gi];
      if (gm.trivial() || !gm.trivial_on(dec.S_tilde)) continue;
      if (gamma_multiplicity(gt, reps[ri], gm) != 1) continue;
      ChargeFusion cf(gt, reps[ri], gm);
      bool all = true;
      for (Element l : dec.lam.lambda)
        if (l != 0 && std::abs(cf.F(l)) <= tolerance) {
          all = false;
          break;
        }
      if (!all) continue;
      out.found = true;
      out.rep_index = ri;
      out.gamma_index = gi;
      out.rep = diagonalize_on_H(reps[ri], dec.H_tilde);
      out.gamma = gm;
      return out;
    }
  }
  out.fallback = "no (R, gamma) pair is non-vanishing on Lambda~; use vacuum-fusion amplification on <a>";
  return out;
}

}  // namespace anyon
