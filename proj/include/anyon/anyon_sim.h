#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "anyon/conj_word.h"
#include "anyon/group.h"
#include "anyon/rep_theory.h"

namespace anyon::sim {

using SlotId = int;
using Tuple = std::vector<std::uint32_t>;
using Terms = std::vector<std::pair<Tuple, cplx>>;

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SlotKind { kFlux, kCharge, kReference };

struct Slot {
  SlotId id = -1;
  SlotKind kind = SlotKind::kFlux;
  std::vector<Element> cls;           // flux: sorted conjugacy class of the pair
  std::shared_ptr<const Irrep> rep;   // charge: value i*d + j is the (i, j) entry
  unsigned dim = 0;                   // reference: plain d-level system
  std::string name;
};

// What a failed fusion does to the register.
enum class FailurePolicy {
  kDamage,   // the branch is discarded: register marked damaged, amplitudes cleared
  kUnravel,  // the failure is split into hidden Kraus branches and the register stays pure
};

struct RegisterConfig {
  FailurePolicy failure = FailurePolicy::kDamage;
  // Multiplies every flux-fusion vacuum probability (models N-invariant pairs).
  double vacuum_factor = 1.0;
  // On a vacuum result of fuse_with_flux_ancilla, keep the slot as a fresh |h>
  // (false removes it).
  bool replace_on_vacuum = true;
  std::uint64_t seed = 1;
};

struct TranscriptEntry {
  std::string op;
  std::string outcome;
  double probability = 1.0;
  bool hidden = false;
};

enum class FusionKind { kVacuum, kOneDim, kResidue, kNoVacuum };

struct FusionOutcome {
  FusionKind kind = FusionKind::kVacuum;
  std::size_t sector = 0;  // index of the detected one-dimensional sector
  double probability = 0;
  bool damaged = false;
};

enum class Side { kLeft, kRight };

class Register {
 public:
  using Chooser = std::function<std::size_t(const std::vector<double>&, const std::string&)>;

  explicit Register(std::shared_ptr<const Group> g, RegisterConfig cfg = {});

  const Group& group() const { return *group_; }
  std::shared_ptr<const Group> group_ptr() const { return group_; }
  const RegisterConfig& config() const { return cfg_; }
  RegisterConfig& config() { return cfg_; }

  // ---- slots --------------------------------------------------------------
  SlotId add_flux(Element g, std::string name = "");
  SlotId add_flux_superposition(const std::vector<std::pair<Element, cplx>>& terms, std::string name = "");
  // Vacuum pair in the magnetic sector of `member`'s class: uniform superposition.
  SlotId add_vacuum_flux(Element member, std::string name = "");
  // |R(1)>_R, amplitude 1/sqrt(d) on each (i, i).
  SlotId add_vacuum_charge(std::shared_ptr<const Irrep> rep, std::string name = "");
  SlotId add_reference(unsigned dim, unsigned value = 0, std::string name = "");
  // Declares a slot without changing the amplitudes; use with assign().
  SlotId declare(Slot s);
  // Replaces the whole state. Tuples follow the current slot order.
  void assign(const Terms& terms);

  const Slot& slot(SlotId id) const;
  std::vector<SlotId> slot_ids() const;
  std::size_t position(SlotId id) const;
  bool has_slot(SlotId id) const;

  // ---- unitary operations ------------------------------------------------
  // target -> f target f^-1 with f = word(source values).
  void apply_conjugation(SlotId target, const ConjWord& word, const std::vector<SlotId>& sources);
  // left: M -> R(f) M; right: M -> M R(f)^-1.
  void apply_charge_braiding(SlotId charge, Side side, const ConjWord& word, const std::vector<SlotId>& sources);
  // Exchanges the contents of two slots; ids keep their positions.
  void swap_slots(SlotId a, SlotId b);
  // Arbitrary value permutation of one slot conditioned on other slots, e.g.
  // classical corrections on reference systems.
  void apply_value_map(SlotId target, const std::vector<SlotId>& sources,
                       const std::function<std::uint32_t(std::uint32_t, const std::vector<std::uint32_t>&)>& f);
  void apply_phase(const std::vector<SlotId>& slots, const std::function<cplx(const std::vector<std::uint32_t>&)>& f);

  // ---- fusions ----------------------------------------------------------
  // Fuse the pair in `slot` against an ancilla of flux h^-1.
  FusionOutcome fuse_with_flux_ancilla(SlotId slot, Element h);
  // Fuse the two members of the pair with each other; the slot is consumed.
  FusionOutcome fuse_internal(SlotId slot);
  // Fuse a charge pair and read which of `sectors` (each of multiplicity one
  // in R x R*) appears; anything else is a residue. The slot is consumed.
  FusionOutcome fuse_charge(SlotId slot, const std::vector<OneDimRep>& sectors);
  FusionOutcome fuse_charge_pair(SlotId slot, const OneDimRep& target);

  // Projective measurement of one slot onto orthonormal `vectors` (given as
  // value -> amplitude). A completing "rest" outcome has index vectors.size().
  // Returns the outcome index; the slot is removed when `remove` is set.
  std::size_t measure_slot(SlotId slot, const std::vector<std::vector<std::pair<std::uint32_t, cplx>>>& vectors,
                           const std::string& op, bool remove = true, bool hidden = false);
  // Discard a slot by a hidden measurement in its value basis.
  void discard(SlotId slot);
  // Measurement whose outcome is drawn from `rng` instead of the chooser. Used
  // where the outcome law does not depend on the state (branch enumeration
  // then treats it as classical randomness). Path probability is untouched.
  std::size_t sample_measure(SlotId slot, const std::vector<std::vector<std::pair<std::uint32_t, cplx>>>& vectors,
                             const std::string& op, std::mt19937_64& rng, bool remove = true);
  // Tensors another register (same group) onto this one; returns the new ids
  // of its slots in order.
  std::vector<SlotId> append(const Register& other);

  // ---- inspection -------------------------------------------------------
  const std::map<Tuple, cplx>& amplitudes() const { return amp_; }
  double norm2() const;
  bool damaged() const { return damaged_; }
  double path_probability() const { return path_probability_; }
  void set_path_probability(double p) { path_probability_ = p; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  void note(std::string op, std::string outcome) { transcript_.push_back({std::move(op), std::move(outcome), 1.0, false}); }
  // Amplitudes restricted to `slots` in the given order; other slots must be
  // in a product state with them (checked).
  Terms reduced_terms(const std::vector<SlotId>& slots) const;
  // Value support of one slot.
  std::vector<std::uint32_t> support(SlotId slot) const;
  std::string to_json() const;

  // ---- randomness -------------------------------------------------------
  void set_chooser(Chooser c) { chooser_ = std::move(c); }
  const Chooser& chooser() const { return chooser_; }
  std::size_t choose(const std::vector<double>& probs, const std::string& op);

 private:
  std::shared_ptr<const Group> group_;
  RegisterConfig cfg_;
  std::vector<Slot> slots_;
  SlotId next_id_ = 0;
  std::map<Tuple, cplx> amp_;
  bool damaged_ = false;
  double path_probability_ = 1.0;
  std::vector<TranscriptEntry> transcript_;
  std::mt19937_64 rng_;
  Chooser chooser_;

  SlotId push_slot(Slot s, const std::vector<std::pair<std::uint32_t, cplx>>& local);
  void check_flux(SlotId s) const;
  void damage();
  void renormalize();
  void remove_position(std::size_t pos);
  // Projects the slot onto `v` (value -> amplitude) and returns <v|psi> per rest tuple.
  std::map<Tuple, cplx> contract(std::size_t pos, const std::vector<std::pair<std::uint32_t, cplx>>& v) const;
  void record(const std::string& op, const std::string& outcome, double p, bool hidden);
};

// Fidelity |<ref|reg>|^2 over the listed slots (global phase insensitive).
double fidelity(const Register& reg, const std::vector<SlotId>& slots, const Terms& reference);

// ---- exhaustive branch enumeration -----------------------------------------

struct EnumerateOptions {
  std::size_t node_budget = 1u << 20;
  double min_probability = 1e-14;
};

template <class R>
struct Branch {
  std::vector<std::size_t> choices;
  double probability = 0;
  Register final_register;
  R result;
};

// Depth-first expansion of every outcome of `protocol`, re-running it from
// `factory()` with a prefix of forced choices. Probabilities multiply along a
// path; paths below options.min_probability are pruned.
template <class R>
std::vector<Branch<R>> enumerate_branches(const std::function<Register()>& factory,
                                          const std::function<R(Register&)>& protocol,
                                          const EnumerateOptions& options = {}) {
  std::vector<Branch<R>> out;
  std::vector<std::vector<std::size_t>> stack{{}};
  std::size_t nodes = 0;
  while (!stack.empty()) {
    std::vector<std::size_t> prefix = std::move(stack.back());
    stack.pop_back();
    Register reg = factory();
    std::vector<std::size_t> taken;
    double prob = 1.0;
    reg.set_chooser([&](const std::vector<double>& probs, const std::string&) -> std::size_t {
      if (++nodes > options.node_budget) throw SimError("branch enumeration exceeded the node budget");
      const std::size_t depth = taken.size();
      std::size_t pick;
      if (depth < prefix.size()) {
        pick = prefix[depth];
      } else {
        pick = probs.size();
        for (std::size_t i = 0; i < probs.size(); ++i) {
          if (probs[i] * prob <= options.min_probability) continue;
          if (pick == probs.size()) {
            pick = i;
          } else {
            auto alt = taken;
            alt.push_back(i);
            stack.push_back(std::move(alt));
          }
        }
        if (pick == probs.size()) throw SimError("no outcome above the pruning threshold");
      }
      taken.push_back(pick);
      prob *= probs[pick];
      return pick;
    });
    R result = protocol(reg);
    reg.set_chooser(nullptr);
    out.push_back(Branch<R>{taken, prob, std::move(reg), std::move(result)});
  }
  std::sort(out.begin(), out.end(), [](const Branch<R>& a, const Branch<R>& b) { return a.choices < b.choices; });
  return out;
}

}  // namespace anyon::sim
