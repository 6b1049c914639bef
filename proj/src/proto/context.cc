#include <cmath>
#include <sstream>

#include <json.hpp>

#include "anyon/protocols.h"

namespace anyon::proto {

namespace {

long long mod(long long v, long long m) {
  v %= m;
  return v < 0 ? v + m : v;
}

long long inverse_mod(long long v, long long p) {
  v = mod(v, p);
  for (long long x = 1; x < p; ++x)
    if (v * x % p == 1) return x;
  throw ProtocolError("no inverse modulo " + std::to_string(p));
}

ConjWord nested(Element b, const Group& g, unsigned commutators) {
  ConjWord w = ConjWord::arg(0) * ConjWord::constant(g.inv(b));
  for (unsigned k = 0; k < commutators; ++k) w = ConjWord::commutator(w, ConjWord::constant(b));
  return w;
}

}  // namespace

// ---- words ---------------------------------------------------------------------

ConjWord compile_controlled_x(const Decomposition& dec) {
  const Group& g = dec.Gt();
  if (dec.period_l == 0) throw ProtocolError("decomposition has no period for h -> [h, b]");
  ConjWord w = nested(dec.b, g, dec.period_l - 1);
  for (Element h : dec.hspace.by_code) {
    const Element arg = g.conj(h, dec.b);
    if (w.eval(g, std::span<const Element>(&arg, 1)) != h)
      throw ProtocolError("controlled-X word fails on an orbit element; wrong b or period");
  }
  return w;
}

ConjWord compile_controlled_x_power(const SemidirectSpec& spec) {
  spec.validate();
  const Element binv = sdp_element(spec, 0, spec.q - 1);
  const long long e = inverse_mod(1 - static_cast<long long>(spec.t), spec.p);
  return (ConjWord::arg(0) * ConjWord::constant(binv)).pow(e);
}

ConjWord compile_distill_word(const Decomposition& dec) {
  const Group& g = dec.Gt();
  const unsigned l = dec.period_l;
  unsigned k = l - 1;
  while (k + 1 < dec.exhaustive_depth) k += l;
  ConjWord w = nested(dec.b, g, k);
  std::vector<Element> cls;
  for (Element x = 0; x < g.order(); ++x) cls.push_back(g.conj(x, dec.b));
  for (Element c : cls) {
    Element v = w.eval(g, std::span<const Element>(&c, 1));
    if (!contains(dec.H_tilde, v)) throw ProtocolError("distillation word leaves H~");
  }
  for (Element h : dec.hspace.by_code) {
    const Element arg = g.conj(h, dec.b);
    if (w.eval(g, std::span<const Element>(&arg, 1)) != h) throw ProtocolError("distillation word fails on the orbit");
  }
  return w;
}

GatePlan compile_times_t_gate(const SemidirectSpec& spec) {
  spec.validate();
  GatePlan plan;
  plan.name = "times_t";
  plan.qudits = 1;
  plan.ancillas = 1;
  const long long minus_inv_t = mod(-inverse_mod(spec.t, spec.p), spec.p);
  plan.steps.push_back({GateStep::Kind::kCX, 0, 1, static_cast<long long>(spec.t)});
  plan.steps.push_back({GateStep::Kind::kCX, 1, 0, minus_inv_t});
  plan.steps.push_back({GateStep::Kind::kSwap, 0, 1, 1});
  return plan;
}

// ---- context -------------------------------------------------------------------

Element Context::comp(long long i) const { return code[static_cast<std::size_t>(mod(i, d))]; }

std::optional<unsigned> Context::index_of(Element e) const {
  for (unsigned i = 0; i < d; ++i)
    if (code[i] == e) return i;
  return std::nullopt;
}

std::vector<std::pair<std::uint32_t, cplx>> Context::tilde_vector(unsigned s) const {
  std::vector<std::pair<std::uint32_t, cplx>> v;
  const double n = 1.0 / std::sqrt(static_cast<double>(d));
  for (unsigned y = 0; y < d; ++y) v.emplace_back(code[y], n * root_of_unity(-static_cast<long long>(s) * y, d));
  return v;
}

std::vector<std::pair<std::uint32_t, cplx>> Context::basis_vector(unsigned i) const { return {{code[i % d], 1.0}}; }

std::shared_ptr<const Context> make_context(const Group& g) {
  auto ctx = std::make_shared<Context>();
  ctx->dec = std::make_shared<const Decomposition>(decompose(g));
  const Decomposition& dec = *ctx->dec;
  ctx->group = std::make_shared<const Group>(dec.Gt());
  const Group& gt = *ctx->group;
  ctx->d = static_cast<unsigned>(dec.p());
  ctx->a = dec.a_star;
  ctx->b = dec.b;
  for (unsigned i = 0; i < ctx->d; ++i) ctx->code.push_back(gt.conj(gt.pow(ctx->a, i), ctx->b));
  for (Element h : dec.hspace.by_code) ctx->orbit.push_back(gt.conj(h, ctx->b));
  ctx->cx = compile_controlled_x(dec);
  ctx->distill_word = compile_distill_word(dec);
  ctx->one_dim = one_dim_reps(gt);
  ChargePair cp = select_charge_pair(dec);
  ctx->charge_pair_found = cp.found;
  ctx->fallback = cp.fallback;
  if (cp.found) {
    ctx->rep = std::make_shared<const Irrep>(cp.rep);
    ctx->gamma = cp.gamma;
  } else {
    // any irrep faithful somewhere on H~ still serves the vacuum-fusion route
    for (auto& r : irreps(gt)) {
      bool nontrivial = false;
      for (Element h : dec.H_tilde)
        if ((r(h) - CMat::Identity(r.dim, r.dim)).norm() > 1e-9) nontrivial = true;
      if (nontrivial) {
        ctx->rep = std::make_shared<const Irrep>(diagonalize_on_H(r, dec.H_tilde));
        break;
      }
    }
  }
  return ctx;
}

// ---- outcome -------------------------------------------------------------------

std::string to_string(Status s) {
  switch (s) {
    case Status::kSuccess: return "success";
    case Status::kFailure: return "failure";
    case Status::kProjectedZero: return "projected_zero";
    case Status::kExhausted: return "exhausted";
    case Status::kInconclusive: return "inconclusive";
  }
  return "?";
}

std::string ProtocolOutcome::to_json() const {
  nlohmann::json j{{"success", success},     {"status", to_string(status)}, {"probability", probability},
                   {"p_pp", p_pp},           {"approximate", approximate},  {"rounds", rounds},
                   {"outcomes", outcomes},   {"slots", slots},              {"note", note}};
  return j.dump();
}

// ---- machine -------------------------------------------------------------------

Machine::Machine(std::shared_ptr<const Context> ctx, Register& reg) : ctx_(std::move(ctx)), reg_(&reg) {
  if (!reg.group().same_table(*ctx_->group)) throw ProtocolError("register and context use different groups");
}

Machine::Machine(const Context& ctx, Register& reg) : Machine(std::shared_ptr<const Context>(std::shared_ptr<const Context>(), &ctx), reg) {}

Machine Machine::rebind(Register& reg) const {
  Machine m(ctx_, reg);
  m.z_anc_ = z_anc_;
  return m;
}

SlotId Machine::add_basis(unsigned i, std::string name) {
  SlotId s = reg_->add_flux(ctx_->comp(0), std::move(name));
  if (i % ctx_->d) x(s, i);
  return s;
}

SlotId Machine::add_tilde(unsigned i, std::string name) {
  SlotId s = reg_->add_flux_superposition(ctx_->tilde_vector(0), std::move(name));
  if (i % ctx_->d) z(s, -static_cast<long long>(i));
  return s;
}

SlotId Machine::add_state(const std::vector<cplx>& amps, std::string name) {
  if (amps.size() != ctx_->d) throw ProtocolError("state has the wrong dimension");
  std::vector<std::pair<Element, cplx>> terms;
  for (unsigned i = 0; i < ctx_->d; ++i)
    if (amps[i] != cplx(0)) terms.emplace_back(ctx_->code[i], amps[i]);
  return reg_->add_flux_superposition(terms, std::move(name));
}

void Machine::x(SlotId q, long long k) {
  const Group& g = *ctx_->group;
  reg_->apply_conjugation(q, ConjWord::constant(g.pow(ctx_->a, mod(k, ctx_->d))), {});
}

SlotId Machine::z_ancilla() {
  if (z_anc_ < 0 || !reg_->has_slot(z_anc_)) z_anc_ = reg_->add_flux_superposition(ctx_->tilde_vector(1), "z-ancilla");
  return z_anc_;
}

void Machine::z(SlotId q, long long k) {
  k = mod(k, ctx_->d);
  if (k == 0) return;
  SlotId anc = z_ancilla();
  reg_->apply_conjugation(anc, ctx_->cx.pow(k), {q});
}

void Machine::cx(SlotId src, SlotId tgt, long long k) {
  k = mod(k, ctx_->d);
  if (k == 0) return;
  reg_->apply_conjugation(tgt, ctx_->cx.pow(k), {src});
}

void Machine::run(const GatePlan& plan, const std::vector<SlotId>& data) {
  if (static_cast<int>(data.size()) != plan.qudits) throw ProtocolError("plan expects " + std::to_string(plan.qudits) + " qudits");
  std::vector<SlotId> wires = data;
  for (int i = 0; i < plan.ancillas; ++i) wires.push_back(add_basis(0, "plan-ancilla"));
  for (const auto& s : plan.steps) {
    switch (s.kind) {
      case GateStep::Kind::kX: x(wires[s.tgt], s.power); break;
      case GateStep::Kind::kZ: z(wires[s.tgt], s.power); break;
      case GateStep::Kind::kCX: cx(wires[s.src], wires[s.tgt], s.power); break;
      case GateStep::Kind::kSwap: reg_->swap_slots(wires[s.src], wires[s.tgt]); break;
    }
  }
  for (std::size_t i = data.size(); i < wires.size(); ++i) reg_->discard(wires[i]);
}

std::size_t Machine::measure(SlotId q, bool x_basis, bool remove) {
  std::vector<std::vector<std::pair<std::uint32_t, cplx>>> vecs;
  for (unsigned i = 0; i < ctx_->d; ++i) vecs.push_back(x_basis ? ctx_->tilde_vector(i) : ctx_->basis_vector(i));
  return reg_->measure_slot(q, vecs, x_basis ? "measure_x" : "measure_z", remove);
}

bool Machine::in_code_space(SlotId q) const {
  for (auto v : reg_->support(q))
    if (!ctx_->index_of(v)) return false;
  return true;
}

Eigen::VectorXcd Machine::code_state(const std::vector<SlotId>& slots) const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < slots.size(); ++i) n *= ctx_->d;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& [t, a] : reg_->reduced_terms(slots)) {
    std::size_t idx = 0;
    for (auto e : t) {
      auto i = ctx_->index_of(e);
      if (!i) throw ProtocolError("slot left the code space");
      idx = idx * ctx_->d + *i;
    }
    v[static_cast<Eigen::Index>(idx)] += a;
  }
  return v;
}

double Machine::fidelity(const std::vector<SlotId>& slots, const Eigen::VectorXcd& target) const {
  Terms ref;
  for (Eigen::Index k = 0; k < target.size(); ++k) {
    if (target[k] == cplx(0)) continue;
    sim::Tuple t(slots.size());
    std::size_t rest = static_cast<std::size_t>(k);
    for (std::size_t i = slots.size(); i-- > 0;) {
      const unsigned digit = static_cast<unsigned>(rest % ctx_->d);
      rest /= ctx_->d;
      const auto& s = reg_->slot(slots[i]);
      t[i] = s.kind == sim::SlotKind::kFlux ? ctx_->code[digit] : digit;
    }
    ref.push_back({t, target[k]});
  }
  return sim::fidelity(*reg_, slots, ref);
}

}  // namespace anyon::proto
