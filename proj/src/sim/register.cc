#include <cmath>
#include <numbers>

#include <json.hpp>

#include "anyon/anyon_sim.h"

namespace anyon::sim {

namespace {

using Vector = std::vector<std::pair<std::uint32_t, cplx>>;

// Orthonormal basis of the values `vals` whose first element is the uniform vector.
std::vector<Vector> fourier_basis(const std::vector<std::uint32_t>& vals) {
  const std::size_t n = vals.size();
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Vector> out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m) out[k].emplace_back(vals[m], s * root_of_unity(static_cast<long long>(k * m), n));
  return out;
}

std::vector<Vector> value_basis(const std::vector<std::uint32_t>& vals) {
  std::vector<Vector> out;
  for (auto v : vals) out.push_back({{v, 1.0}});
  return out;
}

}  // namespace

Register::Register(std::shared_ptr<const Group> g, RegisterConfig cfg)
    : group_(std::move(g)), cfg_(cfg), rng_(cfg.seed) {
  if (!group_) throw SimError("register needs a group");
  amp_[{}] = 1.0;
}

// ---- slots ------------------------------------------------------------------

SlotId Register::push_slot(Slot s, const Vector& local) {
  s.id = next_id_++;
  std::map<Tuple, cplx> next;
  for (const auto& [t, a] : amp_)
    for (const auto& [v, b] : local) {
      if (b == cplx(0)) continue;
      Tuple u = t;
      u.push_back(v);
      next[u] += a * b;
    }
  amp_ = std::move(next);
  slots_.push_back(std::move(s));
  return slots_.back().id;
}

SlotId Register::add_flux(Element g, std::string name) { return add_flux_superposition({{g, 1.0}}, std::move(name)); }

SlotId Register::add_flux_superposition(const std::vector<std::pair<Element, cplx>>& terms, std::string name) {
  if (terms.empty()) throw SimError("empty flux superposition");
  Slot s;
  s.kind = SlotKind::kFlux;
  s.name = std::move(name);
  const Group& g = *group_;
  for (Element x = 0; x < g.order(); ++x) s.cls.push_back(g.conj(x, terms.front().first));
  std::sort(s.cls.begin(), s.cls.end());
  s.cls.erase(std::unique(s.cls.begin(), s.cls.end()), s.cls.end());
  double n = 0;
  for (const auto& [e, a] : terms) {
    if (!contains(s.cls, e)) throw SimError("flux superposition mixes conjugacy classes");
    n += std::norm(a);
  }
  if (n <= 0) throw SimError("flux superposition has zero norm");
  Vector local;
  for (const auto& [e, a] : terms) local.emplace_back(e, a / std::sqrt(n));
  return push_slot(std::move(s), local);
}

SlotId Register::add_vacuum_flux(Element member, std::string name) {
  const Group& g = *group_;
  std::vector<Element> cls;
  for (Element x = 0; x < g.order(); ++x) cls.push_back(g.conj(x, member));
  std::sort(cls.begin(), cls.end());
  cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
  std::vector<std::pair<Element, cplx>> terms;
  for (Element e : cls) terms.emplace_back(e, 1.0);
  return add_flux_superposition(terms, std::move(name));
}

SlotId Register::add_vacuum_charge(std::shared_ptr<const Irrep> rep, std::string name) {
  if (!rep || rep->matrices.size() != group_->order()) throw SimError("unknown charge sector");
  Slot s;
  s.kind = SlotKind::kCharge;
  s.rep = rep;
  s.name = std::move(name);
  const unsigned d = static_cast<unsigned>(rep->dim);
  Vector local;
  for (unsigned i = 0; i < d; ++i) local.emplace_back(i * d + i, 1.0 / std::sqrt(static_cast<double>(d)));
  return push_slot(std::move(s), local);
}

SlotId Register::add_reference(unsigned dim, unsigned value, std::string name) {
  if (value >= dim) throw SimError("reference value out of range");
  Slot s;
  s.kind = SlotKind::kReference;
  s.dim = dim;
  s.name = std::move(name);
  return push_slot(std::move(s), {{value, 1.0}});
}

SlotId Register::declare(Slot s) {
  std::uint32_t v = 0;
  if (s.kind == SlotKind::kFlux) {
    if (s.cls.empty()) throw SimError("flux slot without a class");
    v = s.cls.front();
  }
  return push_slot(std::move(s), {{v, 1.0}});
}

void Register::assign(const Terms& terms) {
  std::map<Tuple, cplx> next;
  for (const auto& [t, a] : terms) {
    if (t.size() != slots_.size()) throw SimError("tuple length does not match the slot count");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Slot& s = slots_[i];
      if (s.kind == SlotKind::kFlux && !contains(s.cls, t[i])) throw SimError("assigned flux outside the slot class");
      if (s.kind == SlotKind::kReference && t[i] >= s.dim) throw SimError("assigned reference value out of range");
      if (s.kind == SlotKind::kCharge && t[i] >= static_cast<unsigned>(s.rep->dim * s.rep->dim))
        throw SimError("assigned charge index out of range");
    }
    if (a != cplx(0)) next[t] += a;
  }
  amp_ = std::move(next);
  damaged_ = false;
  renormalize();
}

const Slot& Register::slot(SlotId id) const { return slots_[position(id)]; }

std::vector<SlotId> Register::slot_ids() const {
  std::vector<SlotId> out;
  for (const auto& s : slots_) out.push_back(s.id);
  return out;
}

std::size_t Register::position(SlotId id) const {
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (slots_[i].id == id) return i;
  throw SimError("unknown slot id " + std::to_string(id));
}

bool Register::has_slot(SlotId id) const {
  return std::any_of(slots_.begin(), slots_.end(), [&](const Slot& s) { return s.id == id; });
}

void Register::check_flux(SlotId s) const {
  if (slot(s).kind != SlotKind::kFlux) throw SimError("slot is not a flux pair");
}

// ---- unitary operations -------------------------------------------------------

void Register::apply_conjugation(SlotId target, const ConjWord& word, const std::vector<SlotId>& sources) {
  check_flux(target);
  if (word.arity() > static_cast<int>(sources.size())) throw SimError("word arity does not match the source count");
  std::vector<std::size_t> src;
  for (SlotId s : sources) {
    if (s == target) throw SimError("target cannot be its own source");
    check_flux(s);
    src.push_back(position(s));
  }
  const std::size_t tp = position(target);
  std::map<Tuple, cplx> next;
  std::vector<Element> args(src.size());
  for (const auto& [t, a] : amp_) {
    for (std::size_t i = 0; i < src.size(); ++i) args[i] = t[src[i]];
    Element f = word.eval(*group_, args);
    Tuple u = t;
    u[tp] = group_->conj(f, t[tp]);
    next[u] += a;
  }
  amp_ = std::move(next);
}

void Register::apply_charge_braiding(SlotId charge, Side side, const ConjWord& word, const std::vector<SlotId>& sources) {
  const Slot& cs = slot(charge);
  if (cs.kind != SlotKind::kCharge) throw SimError("slot is not a charge pair");
  if (word.arity() > static_cast<int>(sources.size())) throw SimError("word arity does not match the source count");
  std::vector<std::size_t> src;
  for (SlotId s : sources) {
    check_flux(s);
    src.push_back(position(s));
  }
  const std::size_t cp = position(charge);
  const unsigned d = static_cast<unsigned>(cs.rep->dim);
  std::map<Tuple, cplx> next;
  std::vector<Element> args(src.size());
  for (const auto& [t, a] : amp_) {
    for (std::size_t i = 0; i < src.size(); ++i) args[i] = t[src[i]];
    const CMat& m = (*cs.rep)(word.eval(*group_, args));
    const unsigned i = t[cp] / d, j = t[cp] % d;
    Tuple u = t;
    for (unsigned k = 0; k < d; ++k) {
      // left: (R M)_{k j} picks R_{k i}; right: (M R^dag)_{i k} picks conj(R_{k j})
      cplx c = side == Side::kLeft ? m(k, i) : std::conj(m(k, j));
      if (c == cplx(0)) continue;
      u[cp] = side == Side::kLeft ? k * d + j : i * d + k;
      next[u] += a * c;
    }
  }
  for (auto it = next.begin(); it != next.end();) it = std::abs(it->second) < 1e-15 ? next.erase(it) : std::next(it);
  amp_ = std::move(next);
}

void Register::swap_slots(SlotId a, SlotId b) {
  const std::size_t pa = position(a), pb = position(b);
  if (pa == pb) return;
  // contents move, ids stay with their positions
  std::swap(slots_[pa], slots_[pb]);
  std::swap(slots_[pa].id, slots_[pb].id);
  std::map<Tuple, cplx> next;
  for (const auto& [t0, x] : amp_) {
    Tuple t = t0;
    std::swap(t[pa], t[pb]);
    next[t] = x;
  }
  amp_ = std::move(next);
}

void Register::apply_value_map(SlotId target, const std::vector<SlotId>& sources,
                               const std::function<std::uint32_t(std::uint32_t, const std::vector<std::uint32_t>&)>& f) {
  const std::size_t tp = position(target);
  std::vector<std::size_t> src;
  for (SlotId s : sources) src.push_back(position(s));
  std::map<Tuple, cplx> next;
  std::vector<std::uint32_t> args(src.size());
  for (const auto& [t, a] : amp_) {
    for (std::size_t i = 0; i < src.size(); ++i) args[i] = t[src[i]];
    Tuple u = t;
    u[tp] = f(t[tp], args);
    const Slot& s = slots_[tp];
    if (s.kind == SlotKind::kFlux && !contains(s.cls, u[tp])) throw SimError("value map leaves the flux class");
    if (s.kind == SlotKind::kReference && u[tp] >= s.dim) throw SimError("value map leaves the reference range");
    if (!next.emplace(u, a).second) throw SimError("value map is not injective on the support");
  }
  amp_ = std::move(next);
}

void Register::apply_phase(const std::vector<SlotId>& slots, const std::function<cplx(const std::vector<std::uint32_t>&)>& f) {
  std::vector<std::size_t> pos;
  for (SlotId s : slots) pos.push_back(position(s));
  std::vector<std::uint32_t> vals(pos.size());
  for (auto& [t, a] : amp_) {
    for (std::size_t i = 0; i < pos.size(); ++i) vals[i] = t[pos[i]];
    a *= f(vals);
  }
}

// ---- randomness ---------------------------------------------------------------

std::size_t Register::choose(const std::vector<double>& probs, const std::string& op) {
  std::size_t k;
  if (chooser_) {
    k = chooser_(probs, op);
  } else {
    std::vector<double> w = probs;
    for (auto& x : w) x = std::max(x, 0.0);
    std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
    k = dist(rng_);
  }
  if (k >= probs.size()) throw SimError("chooser returned an invalid outcome");
  if (probs[k] <= 1e-14) throw SimError("outcome " + std::to_string(k) + " of " + op + " has zero probability");
  path_probability_ *= probs[k];
  return k;
}

void Register::record(const std::string& op, const std::string& outcome, double p, bool hidden) {
  transcript_.push_back({op, outcome, p, hidden});
}

void Register::damage() {
  damaged_ = true;
  amp_.clear();
}

void Register::renormalize() {
  double n = norm2();
  if (n <= 0) throw SimError("state has zero norm");
  const double s = 1.0 / std::sqrt(n);
  for (auto& [t, a] : amp_) a *= s;
}

double Register::norm2() const {
  double n = 0;
  for (const auto& [t, a] : amp_) n += std::norm(a);
  return n;
}

void Register::remove_position(std::size_t pos) {
  std::map<Tuple, cplx> next;
  for (const auto& [t, a] : amp_) {
    Tuple u = t;
    u.erase(u.begin() + static_cast<long>(pos));
    next[u] += a;
  }
  amp_ = std::move(next);
  slots_.erase(slots_.begin() + static_cast<long>(pos));
}

std::map<Tuple, cplx> Register::contract(std::size_t pos, const Vector& v) const {
  std::map<std::uint32_t, cplx> vm;
  for (const auto& [k, c] : v) vm[k] += c;
  std::map<Tuple, cplx> out;
  for (const auto& [t, a] : amp_) {
    auto it = vm.find(t[pos]);
    if (it == vm.end()) continue;
    Tuple u = t;
    u.erase(u.begin() + static_cast<long>(pos));
    out[u] += std::conj(it->second) * a;
  }
  for (auto it = out.begin(); it != out.end();) it = std::abs(it->second) < 1e-14 ? out.erase(it) : std::next(it);
  return out;
}

namespace {

double weight(const std::map<Tuple, cplx>& m) {
  double n = 0;
  for (const auto& [t, a] : m) n += std::norm(a);
  return n;
}

}  // namespace

// ---- fusions --------------------------------------------------------------------

FusionOutcome Register::fuse_with_flux_ancilla(SlotId slot_id, Element h) {
  check_flux(slot_id);
  if (damaged_) throw SimError("operation on a damaged register");
  const std::size_t pos = position(slot_id);
  const Slot s = slots_[pos];
  const double factor = cfg_.vacuum_factor / static_cast<double>(s.cls.size());
  const auto basis = value_basis(s.cls);
  std::vector<std::map<Tuple, cplx>> parts;
  std::vector<double> w;
  double p_h = 0;
  for (const auto& v : basis) {
    parts.push_back(contract(pos, v));
    w.push_back(weight(parts.back()));
    if (v.front().first == h) p_h = w.back();
  }
  const double p_vac = factor * p_h;
  std::vector<double> probs{p_vac};
  if (cfg_.failure == FailurePolicy::kDamage) {
    probs.push_back(std::max(0.0, 1.0 - p_vac));
  } else {
    for (std::size_t k = 0; k < basis.size(); ++k) probs.push_back(basis[k].front().first == h ? (1 - factor) * w[k] : w[k]);
  }
  const std::string op = "fuse_flux(" + std::to_string(h) + ")";
  std::size_t k = choose(probs, op);
  FusionOutcome out;
  out.probability = probs[k];
  if (k == 0) {
    out.kind = FusionKind::kVacuum;
    for (auto it = amp_.begin(); it != amp_.end();) it = it->first[pos] == h ? std::next(it) : amp_.erase(it);
    renormalize();
    if (!cfg_.replace_on_vacuum) remove_position(pos);
    record(op, "vacuum", p_vac, false);
    return out;
  }
  out.kind = FusionKind::kNoVacuum;
  record(op, "no-vacuum", 1 - p_vac, false);
  if (cfg_.failure == FailurePolicy::kDamage) {
    out.damaged = true;
    damage();
    return out;
  }
  amp_ = std::move(parts[k - 1]);
  slots_.erase(slots_.begin() + static_cast<long>(pos));
  renormalize();
  record(op, "hidden:" + std::to_string(k - 1), probs[k], true);
  return out;
}

FusionOutcome Register::fuse_internal(SlotId slot_id) {
  check_flux(slot_id);
  if (damaged_) throw SimError("operation on a damaged register");
  const std::size_t pos = position(slot_id);
  const auto basis = fourier_basis(slots_[pos].cls);
  const double factor = cfg_.vacuum_factor;
  std::vector<std::map<Tuple, cplx>> parts;
  std::vector<double> w;
  for (const auto& v : basis) {
    parts.push_back(contract(pos, v));
    w.push_back(weight(parts.back()));
  }
  const double p_vac = factor * w[0];
  std::vector<double> probs{p_vac};
  if (cfg_.failure == FailurePolicy::kDamage) {
    probs.push_back(std::max(0.0, 1.0 - p_vac));
  } else {
    probs.push_back((1 - factor) * w[0]);
    for (std::size_t k = 1; k < basis.size(); ++k) probs.push_back(w[k]);
  }
  const std::string op = "fuse_internal";
  std::size_t k = choose(probs, op);
  FusionOutcome out;
  out.probability = probs[k];
  if (k == 0) {
    amp_ = std::move(parts[0]);
    slots_.erase(slots_.begin() + static_cast<long>(pos));
    renormalize();
    record(op, "vacuum", p_vac, false);
    return out;
  }
  out.kind = FusionKind::kNoVacuum;
  record(op, "no-vacuum", 1 - p_vac, false);
  if (cfg_.failure == FailurePolicy::kDamage) {
    out.damaged = true;
    damage();
    return out;
  }
  amp_ = std::move(parts[k - 1]);
  slots_.erase(slots_.begin() + static_cast<long>(pos));
  renormalize();
  record(op, "hidden:" + std::to_string(k - 1), probs[k], true);
  return out;
}

FusionOutcome Register::fuse_charge(SlotId slot_id, const std::vector<OneDimRep>& sectors) {
  const std::size_t pos = position(slot_id);
  const Slot s = slots_[pos];
  if (s.kind != SlotKind::kCharge) throw SimError("slot is not a charge pair");
  if (damaged_) throw SimError("operation on a damaged register");
  const int d = s.rep->dim, dd = d * d;
  // orthonormal sector vectors over values i*d + j
  std::vector<Eigen::VectorXcd> vecs;
  for (const auto& gm : sectors) {
    if (gamma_multiplicity(*group_, *s.rep, gm) != 1) throw SimError("sector " + gm.label + " does not occur exactly once");
    ChargeFusion cf(*group_, *s.rep, gm);
    Eigen::VectorXcd v(dd);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) v[i * d + j] = cf.invariant()(i, j) / std::sqrt(static_cast<double>(d));
    vecs.push_back(v);
  }
  if (cfg_.failure == FailurePolicy::kUnravel) {
    CMat proj = CMat::Identity(dd, dd);
    for (const auto& v : vecs) proj -= v * v.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat> es(proj);
    for (int c = 0; c < dd; ++c)
      if (es.eigenvalues()[c] > 0.5) vecs.push_back(es.eigenvectors().col(c));
  }
  std::vector<std::map<Tuple, cplx>> parts;
  std::vector<double> probs;
  double in_sectors = 0;
  for (std::size_t k = 0; k < vecs.size(); ++k) {
    Vector v;
    for (int i = 0; i < dd; ++i)
      if (std::abs(vecs[k][i]) > 1e-15) v.emplace_back(static_cast<std::uint32_t>(i), vecs[k][i]);
    parts.push_back(contract(pos, v));
    probs.push_back(weight(parts.back()));
    if (k < sectors.size()) in_sectors += probs.back();
  }
  if (cfg_.failure == FailurePolicy::kDamage) probs.push_back(std::max(0.0, 1.0 - in_sectors));
  const std::string op = "fuse_charge";
  std::size_t k = choose(probs, op);
  FusionOutcome out;
  out.probability = probs[k];
  if (k < sectors.size()) {
    out.kind = sectors[k].trivial() ? FusionKind::kVacuum : FusionKind::kOneDim;
    out.sector = k;
    amp_ = std::move(parts[k]);
    slots_.erase(slots_.begin() + static_cast<long>(pos));
    renormalize();
    record(op, sectors[k].label, probs[k], false);
    return out;
  }
  out.kind = FusionKind::kResidue;
  record(op, "residue", 1 - in_sectors, false);
  if (cfg_.failure == FailurePolicy::kDamage) {
    out.damaged = true;
    damage();
    return out;
  }
  amp_ = std::move(parts[k]);
  slots_.erase(slots_.begin() + static_cast<long>(pos));
  renormalize();
  record(op, "hidden:" + std::to_string(k - sectors.size()), probs[k], true);
  return out;
}

FusionOutcome Register::fuse_charge_pair(SlotId slot_id, const OneDimRep& target) {
  auto out = fuse_charge(slot_id, {target});
  return out;
}

std::size_t Register::measure_slot(SlotId slot_id, const std::vector<Vector>& vectors, const std::string& op, bool remove,
                                   bool hidden) {
  if (damaged_) throw SimError("operation on a damaged register");
  const std::size_t pos = position(slot_id);
  std::vector<std::map<Tuple, cplx>> parts;
  std::vector<double> probs;
  double total = 0;
  for (const auto& v : vectors) {
    parts.push_back(contract(pos, v));
    probs.push_back(weight(parts.back()));
    total += probs.back();
  }
  probs.push_back(std::max(0.0, norm2() - total));
  std::size_t k = choose(probs, op);
  record(op, hidden ? "hidden:" + std::to_string(k) : std::to_string(k), probs[k], hidden);
  if (k == vectors.size()) {
    // project onto the orthogonal complement, keeping the slot
    for (std::size_t i = 0; i < vectors.size(); ++i)
      for (const auto& [rest, c] : parts[i])
        for (const auto& [val, vc] : vectors[i]) {
          Tuple t = rest;
          t.insert(t.begin() + static_cast<long>(pos), val);
          amp_[t] -= vc * c;
        }
    for (auto it = amp_.begin(); it != amp_.end();) it = std::abs(it->second) < 1e-14 ? amp_.erase(it) : std::next(it);
    renormalize();
    return k;
  }
  if (remove) {
    amp_ = std::move(parts[k]);
    slots_.erase(slots_.begin() + static_cast<long>(pos));
  } else {
    std::map<Tuple, cplx> next;
    for (const auto& [rest, c] : parts[k])
      for (const auto& [val, vc] : vectors[k]) {
        Tuple t = rest;
        t.insert(t.begin() + static_cast<long>(pos), val);
        next[t] += vc * c;
      }
    amp_ = std::move(next);
  }
  renormalize();
  return k;
}

std::size_t Register::sample_measure(SlotId slot_id, const std::vector<Vector>& vectors, const std::string& op,
                                     std::mt19937_64& rng, bool remove) {
  Chooser saved = std::move(chooser_);
  const double path = path_probability_;
  chooser_ = [&rng](const std::vector<double>& probs, const std::string&) {
    std::vector<double> w = probs;
    for (auto& x : w) x = std::max(x, 0.0);
    std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
    return dist(rng);
  };
  std::size_t k;
  try {
    k = measure_slot(slot_id, vectors, op, remove, false);
  } catch (...) {
    chooser_ = std::move(saved);
    throw;
  }
  chooser_ = std::move(saved);
  path_probability_ = path;
  return k;
}

std::vector<SlotId> Register::append(const Register& other) {
  if (!group_->same_table(*other.group_)) throw SimError("cannot append a register over a different group");
  if (damaged_ || other.damaged_) throw SimError("cannot append damaged registers");
  std::vector<SlotId> ids;
  std::map<Tuple, cplx> next;
  for (const auto& [t, a] : amp_)
    for (const auto& [u, b] : other.amp_) {
      Tuple v = t;
      v.insert(v.end(), u.begin(), u.end());
      next[v] += a * b;
    }
  amp_ = std::move(next);
  for (Slot s : other.slots_) {
    s.id = next_id_++;
    ids.push_back(s.id);
    slots_.push_back(std::move(s));
  }
  return ids;
}

void Register::discard(SlotId slot_id) {
  auto vals = support(slot_id);
  measure_slot(slot_id, value_basis(vals), "discard", true, true);
}

// ---- inspection -------------------------------------------------------------------

std::vector<std::uint32_t> Register::support(SlotId slot_id) const {
  const std::size_t pos = position(slot_id);
  std::vector<std::uint32_t> out;
  for (const auto& [t, a] : amp_)
    if (std::abs(a) > 1e-12) out.push_back(t[pos]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Terms Register::reduced_terms(const std::vector<SlotId>& ids) const {
  std::vector<std::size_t> pos;
  for (SlotId s : ids) pos.push_back(position(s));
  std::map<Tuple, std::map<Tuple, cplx>> by_rest;
  for (const auto& [t, a] : amp_) {
    Tuple sel, rest;
    for (std::size_t p : pos) sel.push_back(t[p]);
    for (std::size_t i = 0; i < t.size(); ++i)
      if (std::find(pos.begin(), pos.end(), i) == pos.end()) rest.push_back(t[i]);
    by_rest[rest][sel] += a;
  }
  const std::map<Tuple, cplx>* best = nullptr;
  double best_w = -1;
  for (const auto& [r, m] : by_rest)
    if (weight(m) > best_w) {
      best_w = weight(m);
      best = &m;
    }
  if (!best) return {};
  const double bn = std::sqrt(best_w);
  Terms out;
  for (const auto& [sel, a] : *best) out.emplace_back(sel, a / bn);
  for (const auto& [r, m] : by_rest) {
    cplx ov = 0;
    for (const auto& [sel, a] : m) {
      auto it = best->find(sel);
      if (it != best->end()) ov += std::conj(it->second) * a;
    }
    if (std::abs(std::norm(ov) / best_w - weight(m)) > 1e-9) throw SimError("slots are entangled with the rest of the register");
  }
  return out;
}

std::string Register::to_json() const {
  nlohmann::json j;
  j["group"] = group_->label();
  j["damaged"] = damaged_;
  j["slots"] = nlohmann::json::array();
  for (const auto& s : slots_) {
    const char* kind = s.kind == SlotKind::kFlux ? "flux" : s.kind == SlotKind::kCharge ? "charge" : "reference";
    nlohmann::json e{{"id", s.id}, {"kind", kind}, {"name", s.name}};
    if (s.kind == SlotKind::kCharge) e["rep"] = s.rep->label;
    j["slots"].push_back(e);
  }
  j["amplitudes"] = nlohmann::json::array();
  for (const auto& [t, a] : amp_) j["amplitudes"].push_back({{"basis", t}, {"re", a.real()}, {"im", a.imag()}});
  j["transcript"] = nlohmann::json::array();
  for (const auto& e : transcript_)
    j["transcript"].push_back({{"op", e.op}, {"outcome", e.outcome}, {"probability", e.probability}});
  return j.dump();
}

double fidelity(const Register& reg, const std::vector<SlotId>& slots, const Terms& reference) {
  std::vector<std::size_t> pos;
  for (SlotId s : slots) pos.push_back(reg.position(s));
  std::map<Tuple, cplx> ref;
  double rn = 0;
  for (const auto& [t, a] : reference) {
    if (t.size() != slots.size()) throw SimError("reference shape does not match the slot list");
    ref[t] += a;
  }
  for (const auto& [t, a] : ref) rn += std::norm(a);
  std::map<Tuple, cplx> overlap;  // rest -> <ref|psi_rest>
  for (const auto& [t, a] : reg.amplitudes()) {
    Tuple sel, rest;
    for (std::size_t p : pos) sel.push_back(t[p]);
    for (std::size_t i = 0; i < t.size(); ++i)
      if (std::find(pos.begin(), pos.end(), i) == pos.end()) rest.push_back(t[i]);
    auto it = ref.find(sel);
    if (it != ref.end()) overlap[rest] += std::conj(it->second) * a;
  }
  double f = 0;
  for (const auto& [r, o] : overlap) f += std::norm(o);
  return f / (rn * reg.norm2());
}

}  // namespace anyon::sim
