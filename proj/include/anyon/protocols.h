#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "anyon/anyon_sim.h"
#include "anyon/decomposition.h"
#include "anyon/rep_theory.h"

namespace anyon::proto {

using sim::Register;
using sim::SlotId;
using sim::Terms;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything the protocols need about a group, computed once.
struct Context {
  std::shared_ptr<const Decomposition> dec;
  std::shared_ptr<const Group> group;  // G~, the group the register runs on
  unsigned d = 0;                      // qudit dimension p
  Element a = 0;                       // generator of the computational subgroup
  Element b = 0;
  std::vector<Element> code;           // code[i] = a^i b a^-i
  std::vector<Element> orbit;          // h b h^-1 for every h in H~, by coordinate code
  ConjWord cx;                         // f(h b h^-1) = h on the orbit
  ConjWord distill_word;               // same on the orbit, and maps the whole class of b into H~
  bool charge_pair_found = false;
  std::shared_ptr<const Irrep> rep;    // charge pair irrep, diagonal on H~
  OneDimRep gamma;
  std::vector<OneDimRep> one_dim;      // all one-dimensional reps of G~, trivial first
  std::string fallback;                // set when no exact charge pair exists

  // G~ itself is Z_p x| Z_q.
  bool base_case() const { return dec->n() == 1 && group->order() == static_cast<std::size_t>(d) * dec->q; }
  Element comp(long long i) const;
  std::optional<unsigned> index_of(Element e) const;  // position in `code`
  // Fourier vector |~s> = d^-1/2 sum_y w^{-sy} |y> over the code states.
  std::vector<std::pair<std::uint32_t, cplx>> tilde_vector(unsigned s) const;
  std::vector<std::pair<std::uint32_t, cplx>> basis_vector(unsigned i) const;
};

std::shared_ptr<const Context> make_context(const Group& g);

// ---- compiled words and plans -------------------------------------------------

// Nested-commutator word [[..[g b^-1, b]..], b] with l-1 commutators; verified
// on the whole orbit to satisfy f(h b h^-1) = h.
ConjWord compile_controlled_x(const Decomposition& dec);
// Base-case power form (g b^-1)^{1/(1-t) mod p}.
ConjWord compile_controlled_x_power(const SemidirectSpec& spec);
// Extended word: nested-commutator count k = -1 mod l with k + 1 >= the depth
// at which the exhaustive series reaches H~.
ConjWord compile_distill_word(const Decomposition& dec);

struct GateStep {
  enum class Kind { kX, kZ, kCX, kSwap };
  Kind kind = Kind::kX;
  int src = -1;  // plan-local qudit index
  int tgt = -1;
  long long power = 1;
};

struct GatePlan {
  std::string name;
  int qudits = 0;    // data qudits bound by the caller
  int ancillas = 0;  // |0> ancillas appended after the data
  std::vector<GateStep> steps;
  std::map<std::string, std::vector<GateStep>> corrections;
};

// |i> -> |i t> through a |0> ancilla: CX^t down, CX^{-1/t} up, swap.
GatePlan compile_times_t_gate(const SemidirectSpec& spec);

// ---- qudit-level view of a register -----------------------------------------------

// Qudit gates realized by anyon operations on a register. X is conjugation by a
// constant flux, CX a controlled conjugation, Z a phase kick-back through a
// |~1> ancilla kept in the register.
class Machine {
 public:
  Machine(std::shared_ptr<const Context> ctx, Register& reg);
  // Non-owning: `ctx` must outlive the machine.
  Machine(const Context& ctx, Register& reg);
  // Same context and Z ancilla, different register (a copy of this one).
  Machine rebind(Register& reg) const;

  const Context& ctx() const { return *ctx_; }
  Register& reg() { return *reg_; }

  SlotId add_basis(unsigned i, std::string name = "");
  SlotId add_tilde(unsigned i, std::string name = "");
  SlotId add_state(const std::vector<cplx>& amps, std::string name = "");

  void x(SlotId q, long long k = 1);
  void z(SlotId q, long long k = 1);
  void cx(SlotId src, SlotId tgt, long long k = 1);
  void run(const GatePlan& plan, const std::vector<SlotId>& data);

  // Projective measurement with the register's chooser; outcome d means the
  // slot was not in the code space.
  std::size_t measure(SlotId q, bool x_basis, bool remove = true);

  // Amplitudes over the given code slots, indexed by base-d digits (first
  // slot most significant); other slots must factor out.
  Eigen::VectorXcd code_state(const std::vector<SlotId>& slots) const;
  // Fidelity of the listed code slots with a dense qudit vector.
  double fidelity(const std::vector<SlotId>& slots, const Eigen::VectorXcd& target) const;
  bool in_code_space(SlotId q) const;

 private:
  std::shared_ptr<const Context> ctx_;
  Register* reg_;
  SlotId z_anc_ = -1;
  SlotId z_ancilla();
};

// ---- outcomes ----------------------------------------------------------------

enum class Status { kSuccess, kFailure, kProjectedZero, kExhausted, kInconclusive };
std::string to_string(Status s);

struct ControllerConfig {
  unsigned max_rounds = 0;        // 0: 4(p-1)
  double tolerance = 1e-9;
  unsigned stop_on_zero_run = 0;  // 0: 3(p-1)
  std::uint64_t seed = 1;         // classical randomness (phase walk, bootstrap redraws)
};

struct ProtocolOutcome {
  bool success = false;
  Status status = Status::kFailure;
  double probability = 1.0;  // path probability of this run
  double p_pp = 0;           // analytic success factor when known
  bool approximate = false;
  unsigned rounds = 0;
  std::vector<std::size_t> outcomes;
  std::vector<SlotId> slots;  // slots produced by the protocol
  std::string note;
  std::string to_json() const;
};

// ---- probabilistic projections ------------------------------------------------------

ProtocolOutcome pp_zero(const Context& ctx, Register& reg, SlotId slot);

// Vacuum pair from the class of `sector_member` plus a |0> ancilla; success
// leaves the ancilla in the uniform superposition over the orbit.
ProtocolOutcome distill_tilde0(const Context& ctx, Register& reg, Element sector_member);

using TildeSupply = std::function<SlotId(Register&)>;
// Ideal supply: uniform over the H~ orbit of b.
TildeSupply ideal_tilde0_supply(const Context& ctx);
ProtocolOutcome pp_tilde0(const Context& ctx, Register& reg, SlotId slot, const TildeSupply& supply);

ProtocolOutcome pp_zero_perp(const Context& ctx, Register& reg, SlotId slot, const ControllerConfig& cfg = {});
// Analytic lower bound min_{i>0} |F_{i->1}|^{2(p-1)}.
double pp_zero_perp_bound(const Context& ctx);

ProtocolOutcome pp_lambda(const Context& ctx, Register& reg, SlotId slot);
ProtocolOutcome pp_zero_perp_in_lambda(const Context& ctx, Register& reg, SlotId slot, bool project_lambda = true);
ProtocolOutcome amplify_lambda(const Context& ctx, Register& reg, SlotId slot, const ControllerConfig& cfg = {});
ProtocolOutcome pp_computational_subspace(const Context& ctx, Register& reg, SlotId slot);

// Removes the |0> component of a code slot: pp_zero_perp in the base case,
// the Lambda route otherwise.
ProtocolOutcome remove_zero(const Context& ctx, Register& reg, SlotId slot, const ControllerConfig& cfg = {});

// Runs `protocol` on every branch from the current state and keeps the
// accepted ones, which must all agree up to a global phase; the register is
// replaced by that common post-state. Returns the total acceptance probability.
double postselect(Register& reg, const std::function<bool(Register&)>& protocol,
                  const std::function<void(const Register&)>& inspect = {}, const sim::EnumerateOptions& options = {});

// ---- measurements and ancillas -----------------------------------------------------

struct MeasureConfig {
  unsigned passes = 4;  // repetitions of the d copies before giving up
  bool non_destructive = true;
};

// Fusion-based measurement: d shifted copies, each tested with a
// probabilistic projection; the first conclusive copy fixes the outcome.
ProtocolOutcome measure_basis(const Context& ctx, Register& reg, SlotId slot, bool x_basis,
                              const MeasureConfig& cfg = {});

struct Bootstrap {
  SlotId one = -1;        // |x>, relabeled |1>
  SlotId one_tilde = -1;  // |~y>, relabeled |~1>
  unsigned x = 0, y = 0;  // hidden values, for tests
  unsigned attempts = 0;
  ProtocolOutcome outcome;
};
struct BootstrapConfig {
  unsigned max_attempts = 8;
  unsigned test_trials = 40;
  std::uint64_t seed = 1;  // drives the degeneracy probes, which run on scratch copies
};
Bootstrap bootstrap_one_ancillas(const Context& ctx, Register& reg, const BootstrapConfig& cfg = {});
// X built from the |1> ancilla (controlled-X) and Z from the |~1> ancilla (kick-back).
void apply_x_plan(const Context& ctx, Register& reg, const Bootstrap& bs, SlotId target, long long k = 1);
void apply_z_plan(const Context& ctx, Register& reg, const Bootstrap& bs, SlotId target, long long k = 1);

// ---- magic states, Toffoli, phase walk -------------------------------------------------

enum class MagicKind { kM1, kM2 };

struct MagicResult {
  Register reg;
  std::vector<SlotId> slots;
  double probability = 1;  // acceptance probability of one attempt
  unsigned projections = 0;
};

// Dense reference vectors.
Eigen::VectorXcd magic_vector(MagicKind kind, unsigned d);

MagicResult make_magic(std::shared_ptr<const Context> ctx, MagicKind kind, const ControllerConfig& cfg = {});
// Building blocks, exposed for tests. All postselect on success.
double remove_component(Machine& m, SlotId q, unsigned i, const ControllerConfig& cfg);
SlotId make_plus01(Machine& m, double& probability, const ControllerConfig& cfg);
// Appends a slot holding delta_{i,n} delta_{j,m}.
SlotId mark_pair(Machine& m, SlotId i, SlotId j, unsigned n, unsigned mm, double& probability,
                 const ControllerConfig& cfg);

using MagicSupply = std::function<std::vector<SlotId>(Register&)>;
// Appends copies of an already prepared magic register.
MagicSupply cached_supply(const MagicResult& magic);

struct PhaseWalkResult {
  ProtocolOutcome outcome;
  std::vector<unsigned> exponents;  // accumulated f(a, b) mod d, index a*d + b
};
// One use of an M2 state: returns (alpha, beta).
std::pair<unsigned, unsigned> phase_step(Machine& m, SlotId q1, SlotId q2, const MagicSupply& m2, std::mt19937_64& rng);
PhaseWalkResult phase_walk(Machine& m, SlotId q1, SlotId q2, const std::function<long long(unsigned, unsigned)>& target,
                           const MagicSupply& m2, const ControllerConfig& cfg);

// Teleported Toffoli on (a, b, c) -> (a, b, c + ab). Returns the new slots
// holding the three qudits.
ProtocolOutcome apply_toffoli(Machine& m, const std::vector<SlotId>& abc, const MagicSupply& m1, const MagicSupply& m2,
                              const ControllerConfig& cfg);

// p = 2: qubit M1 from controlled conjugations by a, b a b^-1 and x.
struct MagicP2Result {
  Register reg;
  std::vector<SlotId> slots;
  double probability = 1;
  bool removed_110 = false;
};
MagicP2Result magic_p2(std::shared_ptr<const Context> ctx, const std::vector<Element>& x_sequence = {});

// Teleports `slot` into a fresh code slot; leaked inputs give some code state.
ProtocolOutcome leakage_correct(Machine& m, SlotId slot);

}  // namespace anyon::proto
