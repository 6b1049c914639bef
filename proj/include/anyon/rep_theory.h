#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "anyon/decomposition.h"
#include "anyon/group.h"

namespace anyon {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// e^{2 pi i k / n}
cplx root_of_unity(long long k, long long n);

struct CharacterTable {
  std::vector<ConjugacyClass> classes;
  std::vector<std::vector<cplx>> rows;  // rows[r][c]: character r on class c
  std::vector<int> dims;
};

// Simultaneous eigenvectors of the class-sum structure constants. Rows are
// sorted by dimension, then by the (phase, magnitude) sequence of values, so
// the trivial character is row 0.
CharacterTable character_table(const Group& g, std::uint64_t seed = 1);

struct Irrep {
  std::string label;
  int dim = 0;
  std::vector<CMat> matrices;  // indexed by element
  // Elements on which every matrix is diagonal (set by diagonalize_on_H).
  Subgroup diagonal_on;

  const CMat& operator()(Element g) const { return matrices[g]; }
  cplx character(Element g) const { return matrices[g].trace(); }
};

std::vector<Irrep> irreps(const Group& g, const CharacterTable& table, std::uint64_t seed = 1);
std::vector<Irrep> irreps(const Group& g, std::uint64_t seed = 1);

// Max deviation from R(g)R(h) = R(gh) and from unitarity.
double homomorphism_error(const Group& g, const Irrep& r);

// The q-dimensional induced irrep of Z_p x| Z_q in its natural basis.
Irrep semidirect_irrep(const SemidirectSpec& spec, unsigned omega_index);

// Basis change making R(h) diagonal for every h in `abelian`.
Irrep diagonalize_on_H(const Irrep& r, const Subgroup& abelian, std::uint64_t seed = 7);

// Homomorphism into U(1) with value root_of_unity(exponent[g], e).
struct OneDimRep {
  std::string label;
  unsigned e = 1;
  std::vector<unsigned> exponent;

  cplx operator()(Element g) const { return root_of_unity(exponent[g], e); }
  bool trivial() const;
  bool trivial_on(const Subgroup& s) const;
};

// All one-dimensional representations, read off the abelianization; trivial first.
std::vector<OneDimRep> one_dim_reps(const Group& g);

struct FusionEntry {
  unsigned key = 0;  // index i (semidirect tables) or element h
  unsigned gamma = 0;
  cplx value;
};

struct FusionAmplitudeTable {
  std::string rep;
  std::string gamma;
  std::string phase_convention;
  std::vector<FusionEntry> entries;

  cplx at(unsigned key, unsigned gamma) const;
  std::string to_csv() const;
  std::string to_json() const;
};

// F_{i->j} = (1/q) sum_k gamma^{-kj} omega^{i t^{k-1}} for 0 <= i < p, 0 <= j < q.
FusionAmplitudeTable fusion_F_semidirect(const SemidirectSpec& spec, unsigned omega_index);

// Charge-pair fusion onto a one-dimensional sector gamma of R (x) R*.
class ChargeFusion {
 public:
  ChargeFusion(const Group& g, const Irrep& r, const OneDimRep& gamma);

  // Unit vector of the gamma sector under <M1, M2> = Tr(M1^dag M2) / d;
  // first non-zero row-major entry real positive.
  const CMat& invariant() const { return v_; }
  cplx amplitude(const CMat& m) const;  // <v_gamma, M>
  cplx F(Element h) const { return amplitude((*r_)(h)); }
  const Irrep& rep() const { return *r_; }

 private:
  const Irrep* r_;
  CMat v_;
};

int gamma_multiplicity(const Group& g, const Irrep& r, const OneDimRep& gamma);
cplx fusion_F_general(const Group& g, const Irrep& r, const OneDimRep& gamma, Element h);
FusionAmplitudeTable fusion_table_general(const Group& g, const Irrep& r, const OneDimRep& gamma,
                                          const Subgroup& elements);

// |F_{h->gamma}|^2 from the diagonal characters of R on an abelian normal
// subgroup containing h. R must have diagonal_on set.
double fusion_norm_diagonal(const Group& g, const Irrep& r, const OneDimRep& gamma, Element h);
// |F_{h->I}|^2 = (1/(d |C(h)|^2)) sum_i |sum_{h' in C(h)} omega_i^{h'}|^2.
double vacuum_amplitude(const Group& g, const Irrep& r, Element h);

struct ChargePair {
  bool found = false;
  std::size_t rep_index = 0;
  std::size_t gamma_index = 0;
  Irrep rep;  // diagonal on H~
  OneDimRep gamma;
  std::string fallback;  // set when no pair exists
};

// First (R, gamma) in table order with gamma non-trivial, trivial on S~, and
// F_{lambda->gamma} != 0 for every non-trivial lambda in Lambda~.
ChargePair select_charge_pair(const Decomposition& dec, double tolerance = 1e-9);

}  // namespace anyon
