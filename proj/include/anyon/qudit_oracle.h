#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace anyon::oracle {

using cplx = std::complex<double>;

enum class Basis { kZ, kX };

// Dense state of n qudits of prime dimension d. Qudit 0 is the most
// significant digit of the amplitude index.
class QuditState {
 public:
  QuditState(unsigned d, unsigned n);  // |0...0>
  static QuditState basis(unsigned d, const std::vector<unsigned>& digits);
  static QuditState from_amplitudes(unsigned d, unsigned n, Eigen::VectorXcd amps);

  unsigned d() const { return d_; }
  unsigned n() const { return n_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }
  cplx amplitude(const std::vector<unsigned>& digits) const { return amp_[index(digits)]; }
  std::size_t index(const std::vector<unsigned>& digits) const;
  std::vector<unsigned> digits(std::size_t index) const;
  double norm() const { return amp_.norm(); }

  cplx omega(long long k) const;

  QuditState& x(unsigned q, long long k = 1);
  QuditState& z(unsigned q, long long k = 1);
  QuditState& cx(unsigned src, unsigned tgt, long long k = 1);  // |s, t> -> |s, t + k s>
  QuditState& toffoli(unsigned a, unsigned b, unsigned c);     // |a, b, c> -> |a, b, c + ab>
  // |a, b> -> omega^{f(a, b)} |a, b>
  QuditState& phase(unsigned a, unsigned b, const std::function<long long(unsigned, unsigned)>& f);
  // Fourier transform on one qudit: |i> -> |~i> = d^{-1/2} sum_j omega^{-ij} |j>.
  QuditState& to_x_basis(unsigned q);

  // Born probabilities for measuring qudit q in the given basis.
  std::vector<double> distribution(unsigned q, Basis basis) const;
  // Post-measurement state (normalized) for a given outcome; qudit keeps its slot.
  QuditState project(unsigned q, Basis basis, unsigned outcome) const;
  // Seeded sampling; returns the outcome and replaces *this by the post-state.
  unsigned measure(unsigned q, Basis basis, std::uint64_t seed);

  // Tensor product with another register appended after this one.
  QuditState tensor(const QuditState& other) const;

  // {"d", "n", "amplitudes": [[re, im], ...]}
  std::string to_json() const;

 private:
  unsigned d_, n_;
  Eigen::VectorXcd amp_;
  std::size_t stride(unsigned q) const;
};

// |~i> for a single qudit
QuditState tilde(unsigned d, unsigned i);

// |<a|b>|^2
double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

struct BranchState {
  std::string label;
  double probability = 0;
  Eigen::VectorXcd state;
};

struct CompareReport {
  double max_deficit = 0;
  std::vector<double> deficits;
  std::vector<cplx> phases;  // <oracle|anyon> / |.| per branch
  bool ok(double tol) const { return max_deficit < tol; }
};

// Branches are matched positionally; both sides must use the same encoding.
CompareReport compare(const std::vector<BranchState>& anyon_side, const std::vector<BranchState>& oracle_side);

}  // namespace anyon::oracle
