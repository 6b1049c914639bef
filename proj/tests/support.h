#pragma once

// Helpers shared by the protocol tests and the acceptance driver.

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <string>

#include "anyon/protocols.h"
#include "anyon/qudit_oracle.h"

namespace anyon::testing {

inline Group group_named(const std::string& name) {
  if (name == "s3") return semidirect_pq({3, 2, 2});
  if (name == "z7z3") return semidirect_pq({7, 3, 2});
  return named_group(name);
}

inline std::shared_ptr<const proto::Context> context(const std::string& name) {
  static std::map<std::string, std::shared_ptr<const proto::Context>> cache;
  auto& c = cache[name];
  if (!c) c = proto::make_context(group_named(name));
  return c;
}

inline Eigen::VectorXcd random_state(unsigned dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(dim);
  for (unsigned i = 0; i < dim; ++i) v[i] = cplx(nd(rng), nd(rng));
  return v.normalized();
}

inline double deficit(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return 1.0 - oracle::fidelity(a, b);
}

// Dense amplitudes over reference slots (values 0..d-1) followed by code slots.
inline Eigen::VectorXcd dense_with_refs(const proto::Context& ctx, const sim::Register& reg,
                                        const std::vector<sim::SlotId>& refs, const std::vector<sim::SlotId>& code) {
  std::vector<sim::SlotId> all = refs;
  all.insert(all.end(), code.begin(), code.end());
  std::size_t n = 1;
  for (std::size_t i = 0; i < all.size(); ++i) n *= ctx.d;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& [t, a] : reg.reduced_terms(all)) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      unsigned digit = t[k];
      if (k >= refs.size()) {
        auto i = ctx.index_of(t[k]);
        if (!i) throw std::runtime_error("slot outside the code space");
        digit = *i;
      }
      idx = idx * ctx.d + digit;
    }
    v[static_cast<Eigen::Index>(idx)] += a;
  }
  return v;
}

}  // namespace anyon::testing
