#include "anyon/qudit_oracle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace anyon::oracle {

namespace {

long long modd(long long v, unsigned d) {
  long long r = v % static_cast<long long>(d);
  return r < 0 ? r + d : r;
}

}  // namespace

QuditState::QuditState(unsigned d, unsigned n) : d_(d), n_(n) {
  if (d < 2) throw std::invalid_argument("qudit dimension must be at least 2");
  std::size_t size = 1;
  for (unsigned i = 0; i < n; ++i) size *= d;
  amp_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size));
  amp_[0] = 1;
}

QuditState QuditState::basis(unsigned d, const std::vector<unsigned>& digits) {
  QuditState s(d, static_cast<unsigned>(digits.size()));
  s.amp_[0] = 0;
  s.amp_[static_cast<Eigen::Index>(s.index(digits))] = 1;
  return s;
}

QuditState QuditState::from_amplitudes(unsigned d, unsigned n, Eigen::VectorXcd amps) {
  QuditState s(d, n);
  if (amps.size() != s.amp_.size()) throw std::invalid_argument("amplitude vector has the wrong length");
  s.amp_ = std::move(amps);
  return s;
}

std::size_t QuditState::index(const std::vector<unsigned>& digits) const {
  if (digits.size() != n_) throw std::out_of_range("digit count does not match qudit count");
  std::size_t i = 0;
  for (unsigned v : digits) {
    if (v >= d_) throw std::out_of_range("digit out of range");
    i = i * d_ + v;
  }
  return i;
}

std::vector<unsigned> QuditState::digits(std::size_t index) const {
  std::vector<unsigned> out(n_);
  for (unsigned q = n_; q-- > 0;) {
    out[q] = static_cast<unsigned>(index % d_);
    index /= d_;
  }
  return out;
}

std::size_t QuditState::stride(unsigned q) const {
  if (q >= n_) throw std::out_of_range("qudit index out of range");
  std::size_t s = 1;
  for (unsigned i = q + 1; i < n_; ++i) s *= d_;
  return s;
}

cplx QuditState::omega(long long k) const {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(modd(k, d_)) / d_);
}

QuditState& QuditState::x(unsigned q, long long k) {
  const std::size_t s = stride(q);
  Eigen::VectorXcd out(amp_.size());
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    unsigned v = static_cast<unsigned>((i / s) % d_);
    std::size_t j = i + (modd(v + k, d_) - v) * static_cast<long long>(s);
    out[static_cast<Eigen::Index>(j)] = amp_[i];
  }
  amp_ = std::move(out);
  return *this;
}

QuditState& QuditState::z(unsigned q, long long k) {
  const std::size_t s = stride(q);
  for (Eigen::Index i = 0; i < amp_.size(); ++i) amp_[i] *= omega(k * static_cast<long long>((i / s) % d_));
  return *this;
}

QuditState& QuditState::cx(unsigned src, unsigned tgt, long long k) {
  if (src == tgt) throw std::invalid_argument("controlled gate needs distinct qudits");
  const std::size_t ss = stride(src), st = stride(tgt);
  Eigen::VectorXcd out(amp_.size());
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    long long a = static_cast<long long>((i / ss) % d_);
    long long t = static_cast<long long>((i / st) % d_);
    long long j = i + (modd(t + k * a, d_) - t) * static_cast<long long>(st);
    out[j] = amp_[i];
  }
  amp_ = std::move(out);
  return *this;
}

QuditState& QuditState::toffoli(unsigned a, unsigned b, unsigned c) {
  if (a == b || a == c || b == c) throw std::invalid_argument("Toffoli needs distinct qudits");
  const std::size_t sa = stride(a), sb = stride(b), sc = stride(c);
  Eigen::VectorXcd out(amp_.size());
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    long long va = static_cast<long long>((i / sa) % d_);
    long long vb = static_cast<long long>((i / sb) % d_);
    long long vc = static_cast<long long>((i / sc) % d_);
    long long j = i + (modd(vc + va * vb, d_) - vc) * static_cast<long long>(sc);
    out[j] = amp_[i];
  }
  amp_ = std::move(out);
  return *this;
}

QuditState& QuditState::phase(unsigned a, unsigned b, const std::function<long long(unsigned, unsigned)>& f) {
  const std::size_t sa = stride(a), sb = stride(b);
  for (Eigen::Index i = 0; i < amp_.size(); ++i)
    amp_[i] *= omega(f(static_cast<unsigned>((i / sa) % d_), static_cast<unsigned>((i / sb) % d_)));
  return *this;
}

QuditState& QuditState::to_x_basis(unsigned q) {
  const std::size_t s = stride(q);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(amp_.size());
  const double norm = 1.0 / std::sqrt(static_cast<double>(d_));
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    if (amp_[i] == cplx(0)) continue;
    long long v = static_cast<long long>((i / s) % d_);
    Eigen::Index base = i - v * static_cast<long long>(s);
    for (long long j = 0; j < d_; ++j) out[base + j * static_cast<long long>(s)] += norm * omega(-v * j) * amp_[i];
  }
  amp_ = std::move(out);
  return *this;
}

std::vector<double> QuditState::distribution(unsigned q, Basis basis) const {
  std::vector<double> p(d_, 0.0);
  const std::size_t s = stride(q);
  if (basis == Basis::kZ) {
    for (Eigen::Index i = 0; i < amp_.size(); ++i) p[(i / s) % d_] += std::norm(amp_[i]);
  } else {
    const double norm = 1.0 / std::sqrt(static_cast<double>(d_));
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
      if (((i / s) % d_) != 0) continue;
      for (unsigned k = 0; k < d_; ++k) {
        cplx c = 0;  // <~k| on qudit q
        for (unsigned j = 0; j < d_; ++j) c += norm * omega(static_cast<long long>(k) * j) * amp_[i + j * s];
        p[k] += std::norm(c);
      }
    }
  }
  return p;
}

QuditState QuditState::project(unsigned q, Basis basis, unsigned outcome) const {
  if (outcome >= d_) throw std::out_of_range("outcome out of range");
  const std::size_t s = stride(q);
  QuditState out = *this;
  if (basis == Basis::kZ) {
    for (Eigen::Index i = 0; i < amp_.size(); ++i)
      if ((i / s) % d_ != outcome) out.amp_[i] = 0;
  } else {
    const double norm = 1.0 / std::sqrt(static_cast<double>(d_));
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
      if (((i / s) % d_) != 0) continue;
      cplx c = 0;
      for (unsigned j = 0; j < d_; ++j) c += norm * omega(static_cast<long long>(outcome) * j) * amp_[i + j * s];
      for (unsigned j = 0; j < d_; ++j) out.amp_[i + j * s] = c * norm * omega(-static_cast<long long>(outcome) * j);
    }
  }
  double n = out.amp_.norm();
  if (n > 0) out.amp_ /= n;
  return out;
}

unsigned QuditState::measure(unsigned q, Basis basis, std::uint64_t seed) {
  auto p = distribution(q, basis);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<unsigned> dist(p.begin(), p.end());
  unsigned k = dist(rng);
  *this = project(q, basis, k);
  return k;
}

QuditState QuditState::tensor(const QuditState& other) const {
  if (other.d_ != d_) throw std::invalid_argument("tensor of registers with different d");
  QuditState out(d_, n_ + other.n_);
  out.amp_ = Eigen::VectorXcd::Zero(out.amp_.size());
  for (Eigen::Index i = 0; i < amp_.size(); ++i)
    for (Eigen::Index j = 0; j < other.amp_.size(); ++j) out.amp_[i * other.amp_.size() + j] = amp_[i] * other.amp_[j];
  return out;
}

std::string QuditState::to_json() const {
  nlohmann::json j{{"d", d_}, {"n", n_}, {"amplitudes", nlohmann::json::array()}};
  for (Eigen::Index i = 0; i < amp_.size(); ++i) j["amplitudes"].push_back({amp_[i].real(), amp_[i].imag()});
  return j.dump();
}

QuditState tilde(unsigned d, unsigned i) {
  QuditState s = QuditState::basis(d, {i});
  s.to_x_basis(0);
  return s;
}

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity of states with different shapes");
  double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) return 0;
  return std::norm(a.dot(b)) / (na * na * nb * nb);
}

CompareReport compare(const std::vector<BranchState>& anyon_side, const std::vector<BranchState>& oracle_side) {
  if (anyon_side.size() != oracle_side.size()) throw std::invalid_argument("branch sets differ in size");
  CompareReport r;
  for (std::size_t i = 0; i < anyon_side.size(); ++i) {
    double f = fidelity(oracle_side[i].state, anyon_side[i].state);
    cplx ov = oracle_side[i].state.dot(anyon_side[i].state);
    r.deficits.push_back(1.0 - f);
    r.phases.push_back(std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(0));
    r.max_deficit = std::max(r.max_deficit, 1.0 - f);
  }
  return r;
}

}  // namespace anyon::oracle
