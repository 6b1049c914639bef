#include <cmath>

#include "anyon/protocols.h"

namespace anyon::proto {

using sim::FusionKind;

namespace {

using Vectors = std::vector<std::vector<std::pair<std::uint32_t, cplx>>>;

long long mod(long long v, long long m) {
  v %= m;
  return v < 0 ? v + m : v;
}

Vectors code_vectors(const Context& ctx, bool x_basis) {
  Vectors v;
  for (unsigned i = 0; i < ctx.d; ++i) v.push_back(x_basis ? ctx.tilde_vector(i) : ctx.basis_vector(i));
  return v;
}

// Chooser drawing from a private generator; used on scratch copies whose
// randomness must not enter an outer branch enumeration.
Register::Chooser sampling_chooser(std::mt19937_64& rng) {
  return [&rng](const std::vector<double>& probs, const std::string&) {
    std::vector<double> w = probs;
    for (auto& x : w) x = std::max(x, 0.0);
    std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
    return dist(rng);
  };
}

double require_zero_removed(Machine& m, SlotId q, const ControllerConfig& cfg) {
  const Context& ctx = m.ctx();
  return postselect(m.reg(), [&](Register& r) { return remove_zero(ctx, r, q, cfg).success; });
}

// Erases a slot holding a function of other qudits: X measurement, keep 0.
double erase(Machine& m, SlotId q) {
  return postselect(m.reg(), [&](Register& r) { return m.rebind(r).measure(q, true) == 0; });
}

// Appends |delta_{x,0}> for the code value x of `src`.
SlotId indicator(Machine& m, SlotId src, double& probability, const ControllerConfig& cfg) {
  SlotId r = make_plus01(m, probability, cfg);
  for (unsigned k = 1; k < m.ctx().d; ++k) {
    m.cx(src, r, k);
    probability *= require_zero_removed(m, r, cfg);
    m.cx(src, r, -static_cast<long long>(k));
  }
  return r;
}

}  // namespace

// ---- measurement -------------------------------------------------------------------

ProtocolOutcome measure_basis(const Context& ctx, Register& reg, SlotId slot, bool x_basis, const MeasureConfig& cfg) {
  const double start = reg.path_probability();
  Machine m(ctx, reg);
  ProtocolOutcome o;
  for (unsigned pass = 0; pass < cfg.passes; ++pass) {
    for (unsigned j = 0; j < ctx.d; ++j) {
      ++o.rounds;
      bool hit;
      if (x_basis) {
        // copy the X value -r into a |~0> ancilla, shift by j, test for |~0>
        const SlotId anc = m.add_tilde(0, "x-copy");
        m.cx(anc, slot, 1);
        m.z(anc, -static_cast<long long>(j));
        hit = reg.fuse_internal(anc).kind == FusionKind::kVacuum;
      } else {
        const SlotId anc = m.add_basis(0, "z-copy");
        m.cx(slot, anc, 1);
        m.x(anc, -static_cast<long long>(j));
        auto z = pp_zero(ctx, reg, anc);
        hit = z.success;
        if (hit) reg.discard(anc);
      }
      if (reg.damaged()) {
        o.status = Status::kFailure;
        o.note = "register damaged by a failed copy; run with the unravel policy";
        o.probability = reg.path_probability() / start;
        return o;
      }
      if (hit) {
        o.success = true;
        o.status = Status::kSuccess;
        o.outcomes.push_back(j);
        if (cfg.non_destructive)
          o.slots.push_back(slot);
        else
          reg.discard(slot);
        o.probability = reg.path_probability() / start;
        return o;
      }
    }
  }
  o.status = Status::kInconclusive;
  o.note = "no copy was conclusive";
  o.probability = reg.path_probability() / start;
  return o;
}

// ---- |1>, |~1> bootstrap ---------------------------------------------------------------

Bootstrap bootstrap_one_ancillas(const Context& ctx, Register& reg, const BootstrapConfig& cfg) {
  Machine m(ctx, reg);
  Bootstrap bs;
  std::mt19937_64 rng(cfg.seed);
  // One-sided test: true when some trial run of `probe` reports success.
  auto degenerate = [&](const std::function<bool(Register&)>& probe) {
    for (unsigned t = 0; t < cfg.test_trials; ++t) {
      Register scratch = reg;
      scratch.config().failure = sim::FailurePolicy::kUnravel;
      scratch.set_chooser(sampling_chooser(rng));
      if (probe(scratch)) return true;
    }
    return false;
  };

  while (bs.one < 0 || bs.one_tilde < 0) {
    if (++bs.attempts > cfg.max_attempts) {
      bs.outcome.status = Status::kExhausted;
      bs.outcome.note = "every draw was degenerate";
      return bs;
    }
    if (bs.one < 0) {
      const SlotId one = m.add_basis(0, "one");
      const SlotId h = m.add_tilde(0);
      m.cx(h, one, 1);
      reg.discard(h);
      const bool bad = degenerate([&](Register& r) {
        Machine sm = m.rebind(r);
        const SlotId probe = sm.add_basis(0);
        sm.cx(one, probe, 1);
        return pp_zero(ctx, r, probe).success;
      });
      if (bad) {
        reg.discard(one);
      } else {
        bs.one = one;
        bs.x = *ctx.index_of(reg.support(one).front());
      }
    }
    if (bs.one_tilde < 0) {
      const SlotId t = m.add_tilde(0, "one-tilde");
      const SlotId h = m.add_basis(0);
      m.cx(t, h, 1);
      const std::size_t s = reg.measure_slot(h, code_vectors(ctx, true), "discard_x", true, true);
      const bool bad = degenerate([&](Register& r) {
        Machine sm = m.rebind(r);
        const SlotId probe = sm.add_tilde(0);
        sm.cx(probe, t, 1);
        return r.fuse_internal(probe).kind == FusionKind::kVacuum;
      });
      if (bad) {
        reg.discard(t);
      } else {
        bs.one_tilde = t;
        bs.y = static_cast<unsigned>(mod(-static_cast<long long>(s), ctx.d));
      }
    }
  }
  bs.outcome.success = true;
  bs.outcome.status = Status::kSuccess;
  bs.outcome.slots = {bs.one, bs.one_tilde};
  return bs;
}

void apply_x_plan(const Context& ctx, Register& reg, const Bootstrap& bs, SlotId target, long long k) {
  Machine(ctx, reg).cx(bs.one, target, k);
}

void apply_z_plan(const Context& ctx, Register& reg, const Bootstrap& bs, SlotId target, long long k) {
  Machine(ctx, reg).cx(target, bs.one_tilde, k);
}

// ---- magic states ------------------------------------------------------------------

Eigen::VectorXcd magic_vector(MagicKind kind, unsigned d) {
  if (kind == MagicKind::kM1) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d * d);
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) v[(i * d + j) * d + (i * j) % d] = 1.0 / d;
    return v;
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(d * d, 1.0 / d);
  v[0] *= root_of_unity(1, d);
  return v;
}

double remove_component(Machine& m, SlotId q, unsigned i, const ControllerConfig& cfg) {
  m.x(q, -static_cast<long long>(i));
  const double p = require_zero_removed(m, q, cfg);
  m.x(q, i);
  return p;
}

SlotId make_plus01(Machine& m, double& probability, const ControllerConfig& cfg) {
  const SlotId q = m.add_tilde(0, "plus01");
  for (unsigned i = 2; i < m.ctx().d; ++i) probability *= remove_component(m, q, i, cfg);
  return q;
}

SlotId mark_pair(Machine& m, SlotId i, SlotId j, unsigned n, unsigned mm, double& probability,
                 const ControllerConfig& cfg) {
  const unsigned d = m.ctx().d;
  if (d < 3) throw ProtocolError("mark_pair needs d >= 3");
  m.x(i, -static_cast<long long>(n));
  const SlotId u = indicator(m, i, probability, cfg);
  m.x(i, n);
  m.x(j, -static_cast<long long>(mm));
  const SlotId v = indicator(m, j, probability, cfg);
  m.x(j, mm);
  // u, v -> 0 on a match and -1 otherwise; s = number of mismatches
  m.x(u, -1);
  m.x(v, -1);
  const SlotId w = make_plus01(m, probability, cfg);
  // s = 0 loses |0> in the first pass; s = 1 and s = 2 lose |1> when c = 1/s
  for (long long c : {1LL, static_cast<long long>((d + 1) / 2)}) {
    m.cx(u, w, c);
    m.cx(v, w, c);
    probability *= require_zero_removed(m, w, cfg);
    m.cx(u, w, -c);
    m.cx(v, w, -c);
  }
  m.x(u, 1);
  m.x(v, 1);
  probability *= erase(m, u);
  probability *= erase(m, v);
  return w;
}

MagicResult make_magic(std::shared_ptr<const Context> ctx, MagicKind kind, const ControllerConfig& cfg) {
  if (ctx->d < 3) throw ProtocolError("the exact magic-state pipeline needs d >= 3; use magic_p2 for qubits");
  MagicResult out{Register(ctx->group), {}, 1.0, 0};
  Machine m(ctx, out.reg);
  const unsigned d = ctx->d;
  const std::size_t before = out.reg.transcript().size();
  const SlotId i = m.add_tilde(0, "m.i");
  const SlotId j = m.add_tilde(0, "m.j");
  if (kind == MagicKind::kM2) {
    const SlotId w = mark_pair(m, i, j, 0, 0, out.probability, cfg);
    out.probability *= postselect(out.reg, [&](Register& r) { return m.rebind(r).measure(w, true) == 1; });
    out.slots = {i, j};
  } else {
    const SlotId c = m.add_basis(0, "m.ij");
    for (unsigned n = 1; n < d; ++n)
      for (unsigned mm = 1; mm < d; ++mm) {
        const SlotId w = mark_pair(m, i, j, n, mm, out.probability, cfg);
        m.cx(w, c, static_cast<long long>(n * mm));
        out.probability *= erase(m, w);
      }
    out.slots = {i, j, c};
  }
  const auto& tr = out.reg.transcript();
  for (std::size_t k = before; k < tr.size(); ++k)
    if (tr[k].op == "fuse_charge" && !tr[k].hidden) ++out.projections;
  for (SlotId s : out.reg.slot_ids())
    if (std::find(out.slots.begin(), out.slots.end(), s) == out.slots.end()) out.reg.discard(s);
  return out;
}

MagicSupply cached_supply(const MagicResult& magic) {
  return [reg = magic.reg](Register& r) { return r.append(reg); };
}

// ---- phase walk and Toffoli -------------------------------------------------------------

std::pair<unsigned, unsigned> phase_step(Machine& m, SlotId q1, SlotId q2, const MagicSupply& m2, std::mt19937_64& rng) {
  auto s = m2(m.reg());
  if (s.size() != 2) throw ProtocolError("M2 supply must provide two slots");
  m.cx(q1, s[0], 1);
  m.cx(q2, s[1], 1);
  const auto z = code_vectors(m.ctx(), false);
  const auto a = m.reg().sample_measure(s[0], z, "walk_z", rng);
  const auto b = m.reg().sample_measure(s[1], z, "walk_z", rng);
  return {static_cast<unsigned>(a), static_cast<unsigned>(b)};
}

PhaseWalkResult phase_walk(Machine& m, SlotId q1, SlotId q2, const std::function<long long(unsigned, unsigned)>& target,
                           const MagicSupply& m2, const ControllerConfig& cfg) {
  const unsigned d = m.ctx().d;
  const unsigned max_rounds = cfg.max_rounds ? cfg.max_rounds : 20000;
  const double start = m.reg().path_probability();
  PhaseWalkResult res;
  res.exponents.assign(d * d, 0);
  std::mt19937_64 rng(cfg.seed);
  // Accepts once exponents - target is affine in (a, b); the affine part is a
  // product of single-qudit Z powers and a global phase.
  auto affine_part = [&]() -> std::optional<std::pair<long long, long long>> {
    std::vector<long long> diff(d * d);
    for (unsigned a = 0; a < d; ++a)
      for (unsigned b = 0; b < d; ++b) diff[a * d + b] = mod(res.exponents[a * d + b] - target(a, b), d);
    const long long c = diff[0], u = mod(diff[d] - c, d), v = mod(diff[1] - c, d);
    for (unsigned a = 0; a < d; ++a)
      for (unsigned b = 0; b < d; ++b)
        if (diff[a * d + b] != mod(u * a + v * b + c, d)) return std::nullopt;
    return std::make_pair(u, v);
  };
  for (;;) {
    if (auto uv = affine_part()) {
      m.z(q1, -uv->first);
      m.z(q2, -uv->second);
      res.outcome.success = true;
      res.outcome.status = Status::kSuccess;
      break;
    }
    if (res.outcome.rounds >= max_rounds) {
      res.outcome.status = Status::kExhausted;
      res.outcome.note = "walk budget exhausted; accumulated exponents are reported";
      break;
    }
    auto [a, b] = phase_step(m, q1, q2, m2, rng);
    res.exponents[a * d + b] = (res.exponents[a * d + b] + 1) % d;
    res.outcome.outcomes.push_back(a * d + b);
    ++res.outcome.rounds;
  }
  res.outcome.slots = {q1, q2};
  res.outcome.probability = m.reg().path_probability() / start;
  return res;
}

ProtocolOutcome apply_toffoli(Machine& m, const std::vector<SlotId>& abc, const MagicSupply& m1, const MagicSupply& m2,
                              const ControllerConfig& cfg) {
  if (abc.size() != 3) throw ProtocolError("Toffoli acts on three qudits");
  const unsigned d = m.ctx().d;
  const double start = m.reg().path_probability();
  ProtocolOutcome o;
  auto A = m1(m.reg());
  if (A.size() != 3) throw ProtocolError("M1 supply must provide three slots");
  m.cx(A[0], abc[0], -1);
  m.cx(A[1], abc[1], -1);
  m.cx(abc[2], A[2], 1);
  const auto alpha = m.measure(abc[0], false);
  const auto beta = m.measure(abc[1], false);
  const auto gamma = m.measure(abc[2], true);
  o.outcomes = {alpha, beta, gamma};
  if (alpha == d || beta == d || gamma == d) {
    o.status = Status::kFailure;
    o.note = "input left the code space";
    o.probability = m.reg().path_probability() / start;
    return o;
  }
  const auto al = static_cast<long long>(alpha), be = static_cast<long long>(beta), ga = static_cast<long long>(gamma);
  m.x(A[0], al);
  m.x(A[1], be);
  m.x(A[2], -al * be);
  m.cx(A[0], A[2], be);
  m.cx(A[1], A[2], al);
  m.z(A[2], -ga);
  auto walk = phase_walk(m, A[0], A[1], [ga](unsigned a, unsigned b) { return ga * a * b; }, m2, cfg);
  o.rounds = walk.outcome.rounds;
  o.success = walk.outcome.success;
  o.status = walk.outcome.status;
  o.note = walk.outcome.note;
  o.slots = A;
  o.probability = m.reg().path_probability() / start;
  return o;
}

// ---- qubit magic state ----------------------------------------------------------------

MagicP2Result magic_p2(std::shared_ptr<const Context> ctx, const std::vector<Element>& x_sequence) {
  if (ctx->d != 2) throw ProtocolError("magic_p2 needs p = 2");
  const Group& g = *ctx->group;
  const Element a = ctx->a, c = g.conj(ctx->b, a);
  std::vector<Element> xs = x_sequence;
  if (xs.empty()) xs = {a, c, g.mul(a, c)};

  MagicP2Result out{Register(ctx->group), {}, 1.0, true};
  Machine m(ctx, out.reg);
  const SlotId qi = m.add_tilde(0, "m.i"), qj = m.add_tilde(0, "m.j"), qk = m.add_tilde(0, "m.ij");
  out.slots = {qi, qj, qk};
  const ConjWord cx0 = ctx->cx, cx1 = ctx->cx.remap({1}), cx2 = ctx->cx.remap({2});
  // a^{1-i} (b a b^-1)^{1-j}
  const ConjWord head = (ConjWord::constant(a) * cx0.inverse()) *
                        (ConjWord::constant(a) * cx1.inverse()).conjugated_by(ctx->b);
  const Element one = ctx->comp(1), zero = ctx->comp(0);

  for (Element x : xs) {
    std::optional<Element> by;
    for (Element y = 0; y < g.order() && !by; ++y)
      if (g.conj(y, a) == x) by = y;
    if (!by) throw ProtocolError("x is not conjugate to a");
    const ConjWord f = head * cx2.conjugated_by(*by);
    const SlotId anc = m.add_basis(0, "p2-ancilla");
    out.reg.apply_conjugation(anc, f, {qi, qj, qk});
    out.probability *= postselect(
        out.reg, [&](Register& r) { return remove_zero(*ctx, r, anc, {}).success; },
        [&](const Register& r) {
          const std::size_t pi = r.position(qi), pj = r.position(qj), pk = r.position(qk);
          for (const auto& [t, amp] : r.amplitudes())
            if (t[pi] == one && t[pj] == one && t[pk] == zero && amp != cplx(0)) out.removed_110 = false;
        });
    out.reg.apply_conjugation(anc, f.inverse(), {qi, qj, qk});
    out.reg.discard(anc);
  }
  return out;
}

// ---- leakage ----------------------------------------------------------------------

ProtocolOutcome leakage_correct(Machine& m, SlotId slot) {
  const unsigned d = m.ctx().d;
  Register& reg = m.reg();
  const double start = reg.path_probability();
  ProtocolOutcome o;
  const SlotId a1 = m.add_tilde(0, "bell.a");
  const SlotId a2 = m.add_basis(0, "bell.b");
  m.cx(a1, a2, 1);
  m.cx(slot, a1, -1);
  std::size_t mz = m.measure(a1, false);
  if (mz == d) {
    reg.discard(a1);
    o.note = "leaked";
    mz = 0;
  }
  std::size_t sx = m.measure(slot, true);
  if (sx == d) {
    reg.discard(slot);
    o.note = "leaked";
    sx = 0;
  }
  o.outcomes = {mz, sx};
  m.x(a2, -static_cast<long long>(mz));
  m.z(a2, -static_cast<long long>(sx));
  o.success = true;
  o.status = Status::kSuccess;
  o.slots = {a2};
  o.probability = reg.path_probability() / start;
  return o;
}

}  // namespace anyon::proto
