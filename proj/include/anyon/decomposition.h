#pragma once

#include <map>
#include <vector>

#include "anyon/conj_word.h"
#include "anyon/fp_linalg.h"
#include "anyon/group.h"

namespace anyon {

// Elementary abelian subgroup Z_p^n of a group with a fixed generator basis;
// elements are identified with coordinate vectors in F_p^n.
struct ElementaryAbelian {
  int p = 0;
  int n = 0;
  std::vector<Element> generators;
  std::vector<Element> by_code;    // packed coordinate code -> element
  std::map<Element, int> code_of;  // element -> packed code

  int size() const { return static_cast<int>(by_code.size()); }
  fp::Vec coords(Element h) const;
  Element element(const fp::Vec& v) const;
};

// An algebra element sum_g c_g rho(g), realized on H as x -> prod_g (g x g^-1)^{c_g}.
struct AlgebraWitness {
  std::map<Element, int> coeff;  // element of the quotient -> multiplicity mod p
  ConjWord word() const;         // single-slot word
};

struct BalancedMap {
  fp::Mat matrix;
  AlgebraWitness witness;
  ConjWord word;
};

struct LambdaData {
  Element a = 0;
  Subgroup lambda;                  // as elements of the quotient, sorted
  std::vector<fp::Mat> algebra_basis;
  std::vector<AlgebraWitness> algebra_witness;
  // Basis of { M in A : M a = 0 }; these separate Lambda from the rest of H.
  std::vector<fp::Mat> killers;
  std::vector<AlgebraWitness> killer_witness;
};

struct Decomposition {
  Group G;
  Subgroup H;  // exhaustive-commutator limit of G
  Subgroup N;
  Quotient quo;  // G~ = G/N with projection
  const Group& Gt() const { return quo.group; }

  Subgroup H_tilde;
  ElementaryAbelian hspace;
  unsigned q = 0;
  Subgroup HK;         // H~ K_q inside G~
  Subgroup X;          // stabilizer of H~ inside HK
  Element b = 0;
  Subgroup S_tilde;    // centralizer of H~ in G~
  unsigned period_l = 0;        // period of h -> [h, b] on H~
  unsigned exhaustive_depth = 0;  // first j with G~^((j)) = H~

  std::vector<fp::Mat> rho;  // conjugation action of each element of G~
  LambdaData lam;
  Element a_star = 0;
  std::vector<BalancedMap> phi_set;

  int p() const { return hspace.p; }
  int n() const { return hspace.n; }
};

Decomposition decompose(const Group& g);

// Exposed pieces of the decomposition, usable on their own.
std::vector<fp::Mat> conjugation_matrices(const Group& gt, const ElementaryAbelian& h);
LambdaData compute_lambda(const Decomposition& dec, Element a);
std::vector<BalancedMap> balanced_maps(const Decomposition& dec, const Subgroup& lambda, Element a,
                                       std::size_t enumeration_bound = 1u << 20);
// #(l1 -> l') over the map set, indexed [code(l1)][code(l')].
std::vector<std::vector<int>> balance_counts(const Decomposition& dec, const std::vector<BalancedMap>& maps,
                                             const Subgroup& lambda);
bool is_balanced(const Decomposition& dec, const std::vector<BalancedMap>& maps, const Subgroup& lambda);

ElementaryAbelian make_elementary_abelian(const Group& g, const Subgroup& h);

}  // namespace anyon
