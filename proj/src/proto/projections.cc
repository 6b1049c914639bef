#include <algorithm>
#include <cmath>

#include "anyon/protocols.h"

namespace anyon::proto {

using sim::FusionKind;
using sim::Side;

namespace {

ProtocolOutcome finish(ProtocolOutcome o, const Register& reg, double start) {
  o.probability = start > 0 ? reg.path_probability() / start : 0.0;
  if (o.success) o.status = Status::kSuccess;
  return o;
}

ProtocolOutcome failed(ProtocolOutcome o, const Register& reg, double start, std::string note) {
  o.success = false;
  if (o.status == Status::kSuccess) o.status = Status::kFailure;
  o.note = std::move(note);
  return finish(std::move(o), reg, start);
}

std::size_t class_size(const Group& g, Element e) {
  std::vector<Element> cls;
  for (Element x = 0; x < g.order(); ++x) cls.push_back(g.conj(x, e));
  std::sort(cls.begin(), cls.end());
  return static_cast<std::size_t>(std::unique(cls.begin(), cls.end()) - cls.begin());
}

std::vector<OneDimRep> multiplicity_one_sectors(const Context& ctx) {
  std::vector<OneDimRep> out;
  for (const auto& g : ctx.one_dim)
    if (gamma_multiplicity(*ctx.group, *ctx.rep, g) == 1) out.push_back(g);
  return out;
}

cplx overlap(const Register& a, const Register& b) {
  cplx s = 0;
  const auto& bm = b.amplitudes();
  for (const auto& [t, x] : a.amplitudes()) {
    auto it = bm.find(t);
    if (it != bm.end()) s += std::conj(x) * it->second;
  }
  return s;
}

}  // namespace

ProtocolOutcome pp_zero(const Context& ctx, Register& reg, SlotId slot) {
  const double start = reg.path_probability();
  ProtocolOutcome o;
  o.p_pp = reg.config().vacuum_factor / static_cast<double>(reg.slot(slot).cls.size());
  auto f = reg.fuse_with_flux_ancilla(slot, ctx.comp(0));
  o.rounds = 1;
  o.success = f.kind == FusionKind::kVacuum;
  o.outcomes.push_back(o.success ? 0 : 1);
  if (o.success && reg.has_slot(slot)) o.slots.push_back(slot);
  return o.success ? finish(o, reg, start) : failed(o, reg, start, "no vacuum");
}

ProtocolOutcome distill_tilde0(const Context& ctx, Register& reg, Element sector_member) {
  const double start = reg.path_probability();
  const Group& g = *ctx.group;
  ProtocolOutcome o;
  const SlotId vac = reg.add_vacuum_flux(sector_member, "vacuum-pair");
  const SlotId anc = reg.add_flux(ctx.comp(0), "tilde0");
  reg.apply_conjugation(anc, ctx.distill_word, {vac});
  reg.apply_conjugation(vac, ctx.cx.inverse(), {anc});

  const double c = static_cast<double>(class_size(g, ctx.b));
  const bool in_sector = contains(reg.slot(vac).cls, ctx.b);
  o.p_pp = in_sector ? reg.config().vacuum_factor * static_cast<double>(ctx.orbit.size()) / (c * c) : 0.0;

  const bool keep = reg.config().replace_on_vacuum;
  reg.config().replace_on_vacuum = false;
  sim::FusionOutcome f;
  try {
    f = reg.fuse_with_flux_ancilla(vac, ctx.comp(0));
  } catch (...) {
    reg.config().replace_on_vacuum = keep;
    throw;
  }
  reg.config().replace_on_vacuum = keep;
  o.rounds = 1;
  o.success = f.kind == FusionKind::kVacuum;
  o.outcomes.push_back(o.success ? 0 : 1);
  if (!o.success) return failed(o, reg, start, in_sector ? "no vacuum" : "vacuum pair outside the sector of b");
  o.slots.push_back(anc);
  return finish(o, reg, start);
}

TildeSupply ideal_tilde0_supply(const Context& ctx) {
  std::vector<std::pair<Element, cplx>> terms;
  for (Element e : ctx.orbit) terms.emplace_back(e, 1.0);
  return [terms](Register& r) { return r.add_flux_superposition(terms, "tilde0"); };
}

ProtocolOutcome pp_tilde0(const Context&, Register& reg, SlotId slot, const TildeSupply& supply) {
  const double start = reg.path_probability();
  ProtocolOutcome o;
  o.p_pp = reg.config().vacuum_factor;
  auto f = reg.fuse_internal(slot);
  o.rounds = 1;
  o.success = f.kind == FusionKind::kVacuum;
  o.outcomes.push_back(o.success ? 0 : 1);
  if (!o.success) return failed(o, reg, start, "no vacuum");
  if (!supply) throw ProtocolError("no |~0> supply");
  o.slots.push_back(supply(reg));
  return finish(o, reg, start);
}

// ---- |0>-perp sweep -------------------------------------------------------------

double pp_zero_perp_bound(const Context& ctx) {
  if (!ctx.rep) throw ProtocolError("context has no charge representation");
  ChargeFusion cf(*ctx.group, *ctx.rep, ctx.gamma);
  double m = 1.0;
  for (unsigned i = 1; i < ctx.d; ++i) m = std::min(m, std::norm(cf.F(ctx.group->pow(ctx.a, i))));
  return std::pow(m, static_cast<double>(ctx.d - 1));
}

ProtocolOutcome pp_zero_perp(const Context& ctx, Register& reg, SlotId slot, const ControllerConfig& cfg) {
  if (!ctx.base_case()) throw ProtocolError("pp_zero_perp needs a base-case group; use remove_zero");
  if (!ctx.rep) throw ProtocolError("context has no charge representation");
  const Group& g = *ctx.group;
  const unsigned p = ctx.d;
  const unsigned max_rounds = cfg.max_rounds ? cfg.max_rounds : 4 * (p - 1);
  if (max_rounds < p - 1) throw ProtocolError("max_rounds must be at least p-1");
  const unsigned zero_limit = cfg.stop_on_zero_run ? cfg.stop_on_zero_run : 3 * (p - 1);

  const double start = reg.path_probability();
  const auto sectors = multiplicity_one_sectors(ctx);
  std::vector<ChargeFusion> cf;
  for (const auto& s : sectors) cf.emplace_back(g, *ctx.rep, s);
  std::vector<Element> apow(p);
  for (unsigned k = 0; k < p; ++k) apow[k] = g.pow(ctx.a, k);

  ProtocolOutcome o;
  o.p_pp = pp_zero_perp_bound(ctx);
  std::vector<cplx> c(p, 1.0);  // accumulated F product per computational state
  unsigned zero_run = 0;
  bool left_zero = false;
  for (unsigned r = 0; r < max_rounds; ++r) {
    const unsigned beta = r % (p - 1) + 1;
    const SlotId ch = reg.add_vacuum_charge(ctx.rep, "probe");
    reg.apply_charge_braiding(ch, Side::kLeft, ctx.cx.pow(beta), {slot});
    auto f = reg.fuse_charge(ch, sectors);
    ++o.rounds;
    if (f.kind == FusionKind::kResidue) return failed(o, reg, start, "residue");
    const std::size_t j = f.sector;
    o.outcomes.push_back(j);
    for (unsigned i = 0; i < p; ++i) c[i] *= cf[j].F(apow[(beta * i) % p]);
    if (sectors[j].trivial()) {
      if (!left_zero && ++zero_run >= zero_limit) {
        o.status = Status::kProjectedZero;
        return failed(o, reg, start, "long run of trivial outcomes: state projected onto |0>");
      }
    } else {
      left_zero = true;
      zero_run = 0;
    }
    const double scale = std::abs(c[1]);
    bool equal = scale > 0 && std::abs(c[0]) <= cfg.tolerance * scale;
    for (unsigned i = 2; equal && i < p; ++i) equal = std::abs(c[i] - c[1]) <= cfg.tolerance * scale;
    if (equal) {
      o.success = true;
      o.slots.push_back(slot);
      return finish(o, reg, start);
    }
  }
  o.status = Status::kExhausted;
  return failed(o, reg, start, "round budget exhausted before the products equalized");
}

// ---- Lambda route -----------------------------------------------------------------

ProtocolOutcome pp_lambda(const Context& ctx, Register& reg, SlotId slot) {
  const double start = reg.path_probability();
  ProtocolOutcome o;
  const double per = reg.config().vacuum_factor / static_cast<double>(class_size(*ctx.group, ctx.b));
  o.p_pp = std::pow(per, static_cast<double>(ctx.dec->lam.killer_witness.size()));
  for (const auto& w : ctx.dec->lam.killer_witness) {
    const SlotId anc = reg.add_flux(ctx.comp(0), "lambda-test");
    reg.apply_conjugation(anc, w.word().substitute(0, ctx.cx), {slot});
    auto z = pp_zero(ctx, reg, anc);
    ++o.rounds;
    o.outcomes.push_back(z.success ? 0 : 1);
    if (!z.success) return failed(o, reg, start, "killer test failed");
    reg.discard(anc);
  }
  o.success = true;
  o.slots.push_back(slot);
  return finish(o, reg, start);
}

ProtocolOutcome pp_zero_perp_in_lambda(const Context& ctx, Register& reg, SlotId slot, bool project_lambda) {
  if (!ctx.charge_pair_found)
    throw ProtocolError("no exact charge pair (" + ctx.fallback + "); use amplify_lambda");
  const double start = reg.path_probability();
  const Group& g = *ctx.group;
  ProtocolOutcome o;
  if (project_lambda) {
    auto l = pp_lambda(ctx, reg, slot);
    o.rounds = l.rounds;
    o.outcomes = l.outcomes;
    if (!l.success) return failed(o, reg, start, l.note);
  }
  ChargeFusion cf(g, *ctx.rep, ctx.gamma);
  o.p_pp = 1.0;
  for (Element lam : ctx.dec->lam.lambda) {
    if (lam == 0) continue;  // identity
    for (const auto& phi : ctx.dec->phi_set) o.p_pp *= std::norm(cf.F(phi.word.eval(g, std::span<const Element>(&lam, 1))));
    break;
  }
  for (const auto& phi : ctx.dec->phi_set) {
    const SlotId ch = reg.add_vacuum_charge(ctx.rep, "phi-probe");
    reg.apply_charge_braiding(ch, Side::kLeft, phi.word.substitute(0, ctx.cx), {slot});
    auto f = reg.fuse_charge(ch, {ctx.gamma});
    ++o.rounds;
    const bool hit = f.kind == FusionKind::kOneDim || f.kind == FusionKind::kVacuum;
    o.outcomes.push_back(hit ? 1 : 0);
    if (!hit) return failed(o, reg, start, "charge fusion missed the target sector");
  }
  o.success = true;
  o.slots.push_back(slot);
  return finish(o, reg, start);
}

ProtocolOutcome amplify_lambda(const Context& ctx, Register& reg, SlotId slot, const ControllerConfig& cfg) {
  if (!ctx.rep) throw ProtocolError("context has no charge representation");
  const Group& g = *ctx.group;
  const unsigned p = ctx.d;
  const unsigned max_rounds = cfg.max_rounds ? cfg.max_rounds : 64 * p;
  const double start = reg.path_probability();
  ProtocolOutcome o;
  o.approximate = true;

  const auto& hs = ctx.dec->hspace.by_code;
  Subgroup target;
  for (unsigned k = 0; k < p; ++k) target.push_back(g.pow(ctx.a, k));
  std::sort(target.begin(), target.end());
  ChargeFusion vac(g, *ctx.rep, ctx.one_dim.front());
  std::vector<cplx> mult(hs.size(), 1.0);

  for (unsigned r = 0; r < max_rounds; ++r) {
    const unsigned i = r % p;
    const Element shift = g.pow(ctx.a, (p - i) % p);
    const SlotId ch = reg.add_vacuum_charge(ctx.rep, "amplifier");
    reg.apply_charge_braiding(ch, Side::kLeft, ctx.cx * ConjWord::constant(shift), {slot});
    auto f = reg.fuse_charge(ch, {ctx.one_dim.front()});
    ++o.rounds;
    o.outcomes.push_back(f.kind == FusionKind::kVacuum ? 0 : 1);
    if (f.kind != FusionKind::kVacuum) return failed(o, reg, start, "amplifier fusion missed the vacuum");
    for (std::size_t k = 0; k < hs.size(); ++k) mult[k] *= vac.F(g.mul(hs[k], shift));
    if (i != p - 1) continue;
    // after a full sweep the <a> states share one multiplier
    double in = 1e300, out = 0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      if (contains(target, hs[k]))
        in = std::min(in, std::norm(mult[k]));
      else
        out = std::max(out, std::norm(mult[k]));
    }
    const double ratio = in > 0 ? out / in : 1.0;
    o.note = "residual weight ratio " + std::to_string(ratio);
    if (ratio <= cfg.tolerance) {
      o.success = true;
      o.slots.push_back(slot);
      return finish(o, reg, start);
    }
  }
  o.status = Status::kExhausted;
  return finish(o, reg, start);
}

ProtocolOutcome pp_computational_subspace(const Context& ctx, Register& reg, SlotId slot) {
  const double start = reg.path_probability();
  const Group& g = *ctx.group;
  ProtocolOutcome o;
  auto l = pp_lambda(ctx, reg, slot);
  o.rounds = l.rounds;
  o.outcomes = l.outcomes;
  o.p_pp = l.p_pp;
  if (!l.success) return failed(o, reg, start, l.note);
  Subgroup span_a;
  for (unsigned k = 0; k < ctx.d; ++k) span_a.push_back(g.pow(ctx.a, k));
  std::sort(span_a.begin(), span_a.end());
  for (Element lam : ctx.dec->lam.lambda) {
    if (contains(span_a, lam)) continue;
    reg.apply_conjugation(slot, ConjWord::constant(g.inv(lam)), {});
    auto z = pp_zero_perp_in_lambda(ctx, reg, slot, false);
    o.rounds += z.rounds;
    o.outcomes.insert(o.outcomes.end(), z.outcomes.begin(), z.outcomes.end());
    o.p_pp *= z.p_pp;
    if (!z.success) return failed(o, reg, start, z.note);
    reg.apply_conjugation(slot, ConjWord::constant(lam), {});
  }
  o.success = true;
  o.slots.push_back(slot);
  return finish(o, reg, start);
}

ProtocolOutcome remove_zero(const Context& ctx, Register& reg, SlotId slot, const ControllerConfig& cfg) {
  if (ctx.base_case()) return pp_zero_perp(ctx, reg, slot, cfg);
  return pp_zero_perp_in_lambda(ctx, reg, slot, false);
}

// ---- postselection ------------------------------------------------------------------

double postselect(Register& reg, const std::function<bool(Register&)>& protocol,
                  const std::function<void(const Register&)>& inspect, const sim::EnumerateOptions& options) {
  Register base = reg;
  base.set_chooser(nullptr);
  base.set_path_probability(1.0);
  auto branches = sim::enumerate_branches<bool>([&] { return base; }, protocol, options);
  double total = 0;
  const Register* first = nullptr;
  for (const auto& b : branches) {
    if (!b.result) continue;
    const Register& r = b.final_register;
    if (r.damaged()) throw ProtocolError("an accepted branch is damaged");
    if (inspect) inspect(r);
    total += b.probability;
    if (!first) {
      first = &r;
      continue;
    }
    if (r.slot_ids() != first->slot_ids() || std::abs(overlap(*first, r)) < 1 - 1e-9)
      throw ProtocolError("accepted branches disagree; the protocol is not a projection");
  }
  if (!first) throw ProtocolError("no branch of the protocol is accepted");
  auto chooser = reg.chooser();
  const double path = reg.path_probability();
  reg = *first;
  reg.set_chooser(std::move(chooser));
  reg.set_path_probability(path * total);
  return total;
}

}  // namespace anyon::proto
