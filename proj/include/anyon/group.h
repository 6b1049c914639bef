#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace anyon {

using Element = std::uint32_t;
// Sorted list of element indices.
using Subgroup = std::vector<Element>;

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite group stored as a dense multiplication table. Element 0 is the
// identity in every group built through this interface.
class Group {
 public:
  Group() = default;

  static Group from_table(std::string label, const std::vector<std::vector<Element>>& mul);

  std::size_t order() const { return n_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  Element mul(Element a, Element b) const { return table_[a * n_ + b]; }
  Element inv(Element a) const { return inv_[a]; }
  Element pow(Element a, long long k) const;
  // g h g^-1
  Element conj(Element g, Element h) const { return mul(mul(g, h), inv(g)); }
  // x y x^-1 y^-1
  Element comm(Element x, Element y) const { return mul(mul(x, y), mul(inv(x), inv(y))); }
  unsigned element_order(Element a) const;
  bool commute(Element a, Element b) const { return mul(a, b) == mul(b, a); }

  std::vector<std::vector<Element>> rows() const;
  bool same_table(const Group& other) const { return n_ == other.n_ && table_ == other.table_; }

 private:
  std::string label_;
  std::size_t n_ = 0;
  std::vector<Element> table_;
  std::vector<Element> inv_;
};

// ---- constructors -------------------------------------------------------

Group cyclic(unsigned n);
Group direct_product(const Group& a, const Group& b);
// action[k] is the automorphism of `a` attached to element k of `k_group`,
// given as the image list of every element of `a`. Element (x, k) has index
// x + |a| * k and multiplies as (x1, k1)(x2, k2) = (x1 * action[k1](x2), k1 k2).
Group semidirect(const Group& a, const Group& k_group,
                 const std::vector<std::vector<Element>>& action, std::string label = "");
// Extends automorphisms given on generators of `k_group` to the full action
// table; throws if the assignment is not a homomorphism into Aut(a).
std::vector<std::vector<Element>> extend_action(const Group& a, const Group& k_group,
                                                const std::vector<Element>& k_generators,
                                                const std::vector<std::vector<Element>>& images);
// Permutations act on {0..m-1}; (s t)(x) = s(t(x)). The identity is index 0.
Group permutation_group(const std::vector<std::vector<unsigned>>& generators, std::string label = "");

struct SemidirectSpec {
  unsigned p = 0;
  unsigned q = 0;
  unsigned t = 0;
  void validate() const;
};

// Elements a^i b^k are stored at index i + p * k; a = 1, b = p.
Group semidirect_pq(const SemidirectSpec& spec);
// Every valid (p, q, t) with p <= max_p.
std::vector<SemidirectSpec> semidirect_specs(unsigned max_p);
inline Element sdp_element(const SemidirectSpec& s, unsigned i, unsigned k) { return (i % s.p) + s.p * (k % s.q); }

Group symmetric(unsigned n);
Group alternating(unsigned n);
Group dihedral(unsigned n);  // symmetries of the n-gon, order 2n
Group quaternion();          // Q8: index 2*u + s for unit u in {1,i,j,k}, sign s
Group named_group(const std::string& name);
std::vector<std::string> named_groups();

// Generators of the acting factor inside the named fixtures, for tests.
struct NamedGenerators {
  std::vector<Element> normal;  // a_1, a_2, ...
  std::vector<Element> acting;
};
NamedGenerators named_generators(const std::string& name);

// ---- subgroup algorithms ------------------------------------------------

struct ConjugacyClass {
  std::vector<Element> members;  // sorted
  Element representative = 0;    // minimal member
};

std::vector<ConjugacyClass> conjugacy_classes(const Group& g);
std::vector<int> class_index(const Group& g, const std::vector<ConjugacyClass>& classes);

Subgroup closure(const Group& g, const std::vector<Element>& generators);
bool is_subgroup(const Group& g, const Subgroup& s);
bool is_normal(const Group& g, const Subgroup& s);
bool contains(const Subgroup& s, Element x);
Subgroup commutator_subgroup(const Group& g, const Subgroup& a, const Subgroup& b);
Subgroup normal_closure(const Group& g, Element x);
Subgroup whole(const Group& g);
Subgroup trivial_subgroup();
Subgroup centralizer(const Group& g, const Subgroup& of, const Subgroup& within);

enum class SeriesKind { kExhaustive, kDerived };

struct SeriesChain {
  SeriesKind kind = SeriesKind::kDerived;
  std::vector<Subgroup> chain;
  Subgroup limit;
};

SeriesChain series(const Group& g, SeriesKind kind);

enum class Power { kIdentity, kX, kCX, kToffoli };
const char* power_name(Power p);

struct Classification {
  bool abelian = false;
  bool nilpotent = false;
  bool solvable = false;
  Power power = Power::kIdentity;
};

Classification classify(const Group& g);

std::vector<Subgroup> normal_subgroups(const Group& g, std::size_t bound = 512);

struct Quotient {
  Group group;
  std::vector<Element> projection;  // element of G -> coset index
  std::vector<Element> lift;        // coset index -> minimal representative
};

Quotient quotient(const Group& g, const Subgroup& n);

// The subgroup `s` as a group in its own right; local index i <-> s[i].
Group subgroup_as_group(const Group& g, const Subgroup& s, std::string label = "");

}  // namespace anyon
