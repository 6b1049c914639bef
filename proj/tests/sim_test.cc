#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "anyon/anyon_sim.h"

using namespace anyon;
using namespace anyon::sim;

namespace {

const SemidirectSpec kS3{3, 2, 2};

std::shared_ptr<const Group> s3() { return std::make_shared<const Group>(semidirect_pq(kS3)); }

// |i> = |a^i b a^-i>
Element comp(const SemidirectSpec& s, unsigned i) {
  long long e = static_cast<long long>(i) * (1 - static_cast<long long>(s.t));
  e %= s.p;
  if (e < 0) e += s.p;
  return sdp_element(s, static_cast<unsigned>(e), 1);
}

Element a_el() { return sdp_element(kS3, 1, 0); }
Element b_el() { return sdp_element(kS3, 0, 1); }

std::vector<std::pair<Element, cplx>> comp_state(const std::vector<cplx>& amps) {
  std::vector<std::pair<Element, cplx>> out;
  unsigned i = 0;
  for (cplx c : amps) {
    if (c != cplx(0)) out.emplace_back(comp(kS3, i), c);
    ++i;
  }
  return out;
}

Terms comp_terms(const std::vector<cplx>& amps) {
  Terms out;
  for (auto [e, c] : comp_state(amps)) out.push_back({{e}, c});
  return out;
}

std::shared_ptr<const Irrep> two_dim(const Group& g) {
  for (auto& r : irreps(g))
    if (r.dim == 2) return std::make_shared<const Irrep>(r);
  return nullptr;
}

// f(|j>) = a^j via (g b^-1)^-1
ConjWord extract_a() { return (ConjWord::arg(0) * ConjWord::constant(b_el())).inverse(); }

}  // namespace

TEST(sim, add_flux_is_definite) {
  Register reg(s3());
  SlotId s = reg.add_flux(b_el());
  EXPECT_EQ(reg.amplitudes().size(), 1u);
  EXPECT_NEAR(reg.norm2(), 1.0, 1e-12);
  reg.add_flux(comp(kS3, 1));
  EXPECT_EQ(reg.amplitudes().size(), 1u);
  EXPECT_EQ(reg.support(s), (std::vector<std::uint32_t>{b_el()}));
}

TEST(sim, vacuum_flux_is_zero_tilde) {
  Register reg(s3());
  SlotId s = reg.add_vacuum_flux(b_el());
  const double r = 1 / std::sqrt(3.0);
  EXPECT_NEAR(fidelity(reg, {s}, comp_terms({r, r, r})), 1.0, 1e-12);
  SlotId e = reg.add_vacuum_flux(0);
  EXPECT_EQ(reg.support(e), (std::vector<std::uint32_t>{0}));
}

TEST(sim, vacuum_charge_normalization) {
  auto g = s3();
  Register reg(g);
  reg.add_vacuum_charge(two_dim(*g));
  ASSERT_EQ(reg.amplitudes().size(), 2u);
  for (const auto& [t, a] : reg.amplitudes()) EXPECT_NEAR(std::abs(a), 1 / std::sqrt(2.0), 1e-12);
}

TEST(sim, conjugation_by_a_is_x) {
  Register reg(s3());
  SlotId s = reg.add_flux(comp(kS3, 0));
  reg.apply_conjugation(s, ConjWord::constant(a_el()), {});
  EXPECT_EQ(reg.support(s), (std::vector<std::uint32_t>{comp(kS3, 1)}));
  reg.apply_conjugation(s, ConjWord(), {});
  EXPECT_EQ(reg.support(s), (std::vector<std::uint32_t>{comp(kS3, 1)}));
}

TEST(sim, controlled_x_all_pairs) {
  const ConjWord w = (ConjWord::arg(0) * ConjWord::constant(b_el()).inverse()).pow(2);
  for (unsigned i = 0; i < 3; ++i)
    for (unsigned j = 0; j < 3; ++j) {
      Register reg(s3());
      SlotId c = reg.add_flux(comp(kS3, i));
      SlotId t = reg.add_flux(comp(kS3, j));
      reg.apply_conjugation(t, w, {c});
      EXPECT_EQ(reg.support(c), (std::vector<std::uint32_t>{comp(kS3, i)}));
      EXPECT_EQ(reg.support(t), (std::vector<std::uint32_t>{comp(kS3, (i + j) % 3)})) << i << "," << j;
    }
}

TEST(sim, conjugation_errors) {
  Register reg(s3());
  SlotId s = reg.add_flux(b_el());
  EXPECT_THROW(reg.apply_conjugation(s, ConjWord::arg(0), {}), SimError);
  EXPECT_THROW(reg.apply_conjugation(s, ConjWord::arg(0), {s}), SimError);
}

TEST(sim, flux_fusion_probabilities) {
  RegisterConfig cfg;
  std::vector<std::pair<std::vector<cplx>, double>> cases = {
      {{1, 0, 0}, 1.0 / 3}, {{0, 1, 0}, 0.0}, {{1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0}, 1.0 / 6}};
  for (const auto& [amps, expected] : cases) {
    Register reg(s3(), cfg);
    SlotId s = reg.add_flux_superposition(comp_state(amps));
    reg.set_chooser([](const std::vector<double>& p, const std::string&) { return p[0] > 0 ? 0 : 1; });
    auto out = reg.fuse_with_flux_ancilla(s, b_el());
    EXPECT_NEAR(out.probability, expected > 0 ? expected : 1.0, 1e-12);
    if (expected > 0) {
      EXPECT_EQ(out.kind, FusionKind::kVacuum);
      EXPECT_EQ(reg.support(s), (std::vector<std::uint32_t>{comp(kS3, 0)}));
    } else {
      EXPECT_EQ(out.kind, FusionKind::kNoVacuum);
      EXPECT_TRUE(reg.damaged());
    }
  }
}

TEST(sim, flux_fusion_without_replacement_removes_slot) {
  RegisterConfig cfg;
  cfg.replace_on_vacuum = false;
  Register reg(s3(), cfg);
  SlotId keep = reg.add_flux(a_el());
  SlotId s = reg.add_flux(comp(kS3, 0));
  reg.set_chooser([](const std::vector<double>&, const std::string&) { return std::size_t{0}; });
  reg.fuse_with_flux_ancilla(s, b_el());
  EXPECT_FALSE(reg.has_slot(s));
  EXPECT_TRUE(reg.has_slot(keep));
}

TEST(sim, internal_fusion_probabilities) {
  const double r = 1 / std::sqrt(3.0);
  const cplx w = root_of_unity(1, 3);
  std::vector<std::pair<std::vector<cplx>, double>> cases = {
      {{r, r, r}, 1.0}, {{r, r * std::conj(w), r * std::conj(w * w)}, 0.0}, {{1, 0, 0}, 1.0 / 3}};
  for (const auto& [amps, expected] : cases) {
    Register reg(s3());
    std::vector<std::pair<Element, cplx>> terms;
    for (unsigned i = 0; i < 3; ++i) terms.emplace_back(comp(kS3, i), amps[i]);
    SlotId s = reg.add_flux_superposition(terms);
    double seen = -1;
    reg.set_chooser([&](const std::vector<double>& p, const std::string&) {
      seen = p[0];
      return std::size_t{0};
    });
    if (expected == 0.0) {
      EXPECT_THROW(reg.fuse_internal(s), SimError);  // the vacuum branch has zero norm
    } else {
      reg.fuse_internal(s);
      EXPECT_FALSE(reg.has_slot(s));
    }
    EXPECT_NEAR(seen, expected, 1e-12);
  }
}

TEST(sim, charge_fusion_on_entangled_pair) {
  auto g = s3();
  auto rep = two_dim(*g);
  auto gammas = one_dim_reps(*g);
  ASSERT_EQ(gammas.size(), 2u);
  for (std::size_t which = 0; which < 2; ++which) {
    Register reg(g);
    SlotId f = reg.add_vacuum_flux(b_el());
    SlotId c = reg.add_vacuum_charge(rep);
    reg.apply_charge_braiding(c, Side::kLeft, extract_a(), {f});
    EXPECT_NEAR(reg.norm2(), 1.0, 1e-12);
    reg.set_chooser([](const std::vector<double>&, const std::string&) { return std::size_t{0}; });
    auto out = reg.fuse_charge_pair(c, gammas[which]);
    EXPECT_NEAR(out.probability, 0.5, 1e-12);
    EXPECT_EQ(out.kind, which == 0 ? FusionKind::kVacuum : FusionKind::kOneDim);
    if (which == 0) {
      const double s6 = 1 / std::sqrt(6.0);
      EXPECT_NEAR(fidelity(reg, {f}, comp_terms({2 * s6, -s6, -s6})), 1.0, 1e-12);
    } else {
      const double s2 = 1 / std::sqrt(2.0);
      EXPECT_NEAR(fidelity(reg, {f}, comp_terms({0, s2, -s2})), 1.0, 1e-12);
    }
  }
}

TEST(sim, unentangled_charge_fuses_to_vacuum) {
  auto g = s3();
  Register reg(g);
  SlotId c = reg.add_vacuum_charge(two_dim(*g));
  auto out = reg.fuse_charge_pair(c, one_dim_reps(*g)[0]);
  EXPECT_NEAR(out.probability, 1.0, 1e-12);
  EXPECT_FALSE(reg.damaged());
}

TEST(sim, charge_braiding_is_invertible) {
  auto g = s3();
  Register reg(g);
  SlotId f = reg.add_flux(comp(kS3, 1));
  SlotId c = reg.add_vacuum_charge(two_dim(*g));
  auto before = reg.amplitudes();
  reg.apply_charge_braiding(c, Side::kRight, extract_a(), {f});
  reg.apply_charge_braiding(c, Side::kLeft, extract_a(), {f});
  // R(f) M R(f)^-1 = M for M = identity
  ASSERT_EQ(reg.amplitudes().size(), before.size());
  for (const auto& [t, a] : before) EXPECT_NEAR(std::abs(reg.amplitudes().at(t) - a), 0.0, 1e-12);
  reg.apply_charge_braiding(c, Side::kLeft, ConjWord(), {});
  EXPECT_NEAR(reg.norm2(), 1.0, 1e-12);
}

TEST(sim, charge_fusion_matches_fusion_table) {
  const SemidirectSpec spec{7, 3, 2};
  auto g = std::make_shared<const Group>(semidirect_pq(spec));
  auto rep = std::make_shared<const Irrep>(semidirect_irrep(spec, 1));
  auto gammas = one_dim_reps(*g);
  for (std::size_t j = 1; j < gammas.size(); ++j) {
    ChargeFusion cf(*g, *rep, gammas[j]);
    Register reg(g);
    std::vector<std::pair<Element, cplx>> terms;
    for (unsigned i = 0; i < 7; ++i) terms.emplace_back(comp(spec, i), 1.0);
    SlotId f = reg.add_flux_superposition(terms);
    SlotId c = reg.add_vacuum_charge(rep);
    reg.apply_charge_braiding(c, Side::kLeft, (ConjWord::arg(0) * ConjWord::constant(sdp_element(spec, 0, 1)).inverse()).inverse(), {f});
    reg.set_chooser([](const std::vector<double>&, const std::string&) { return std::size_t{0}; });
    reg.fuse_charge_pair(c, gammas[j]);
    // post amplitudes proportional to F(a^{-i(1-t)}) per basis value
    Terms expect;
    double n = 0;
    for (unsigned i = 0; i < 7; ++i) {
      Element gb = reg.group().mul(comp(spec, i), reg.group().inv(sdp_element(spec, 0, 1)));
      cplx amp = cf.F(reg.group().inv(gb));
      expect.push_back({{comp(spec, i)}, amp});
      n += std::norm(amp);
    }
    EXPECT_NEAR(fidelity(reg, {f}, expect), 1.0, 1e-10);
    for (const auto& [t, a] : reg.amplitudes()) {
      auto it = std::find_if(expect.begin(), expect.end(), [&](const auto& e) { return e.first == t; });
      ASSERT_NE(it, expect.end());
      EXPECT_NEAR(std::abs(a), std::abs(it->second) / std::sqrt(n), 1e-10);
    }
  }
}

TEST(sim, swap_slots) {
  Register reg(s3());
  SlotId x = reg.add_flux(comp(kS3, 1));
  SlotId y = reg.add_flux(b_el());
  reg.swap_slots(x, y);
  EXPECT_EQ(reg.position(y), 1u);
  EXPECT_EQ(reg.support(x), (std::vector<std::uint32_t>{b_el()}));
  EXPECT_EQ(reg.amplitudes().begin()->first, (Tuple{b_el(), comp(kS3, 1)}));
  reg.swap_slots(x, y);
  EXPECT_EQ(reg.amplitudes().begin()->first, (Tuple{comp(kS3, 1), b_el()}));
}

TEST(sim, enumerate_single_internal_fusion) {
  auto branches = enumerate_branches<int>(
      [] {
        Register r(s3());
        r.add_vacuum_flux(b_el());
        return r;
      },
      [](Register& r) {
        r.fuse_internal(r.slot_ids().front());
        return 0;
      });
  ASSERT_EQ(branches.size(), 1u);
  EXPECT_NEAR(branches[0].probability, 1.0, 1e-12);
}

TEST(sim, enumerate_flux_projection) {
  const double s2 = 1 / std::sqrt(2.0);
  auto branches = enumerate_branches<bool>(
      [&] {
        Register r(s3());
        r.add_flux_superposition(comp_state({s2, s2, 0}));
        return r;
      },
      [](Register& r) { return r.fuse_with_flux_ancilla(r.slot_ids().front(), b_el()).kind == FusionKind::kVacuum; });
  ASSERT_EQ(branches.size(), 2u);
  EXPECT_TRUE(branches[0].result);
  EXPECT_NEAR(branches[0].probability, 1.0 / 6, 1e-12);
  EXPECT_NEAR(branches[1].probability, 5.0 / 6, 1e-12);
  EXPECT_TRUE(branches[1].final_register.damaged());
}

TEST(sim, enumerate_unravelled_failure_sums_to_one) {
  const double s2 = 1 / std::sqrt(2.0);
  RegisterConfig cfg;
  cfg.failure = FailurePolicy::kUnravel;
  auto g = s3();
  auto rep = two_dim(*g);
  auto branches = enumerate_branches<int>(
      [&] {
        Register r(g, cfg);
        r.add_flux_superposition(comp_state({s2, 0, s2}));
        r.add_vacuum_flux(b_el());
        return r;
      },
      [&](Register& r) {
        auto ids = r.slot_ids();
        r.fuse_with_flux_ancilla(ids[0], b_el());
        SlotId c = r.add_vacuum_charge(rep);
        r.apply_charge_braiding(c, Side::kLeft, extract_a(), {ids[1]});
        r.fuse_charge(c, {one_dim_reps(r.group())[1]});
        r.fuse_internal(ids[1]);
        return 0;
      });
  double total = 0;
  for (const auto& b : branches) {
    total += b.probability;
    EXPECT_FALSE(b.final_register.damaged());
    EXPECT_NEAR(b.final_register.norm2(), 1.0, 1e-9);
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(sim, two_round_sign_sweep) {
  auto g = s3();
  auto rep = two_dim(*g);
  auto sign = one_dim_reps(*g)[1];
  const double r = 1 / std::sqrt(3.0);
  auto branches = enumerate_branches<int>(
      [&] {
        Register reg(g);
        reg.add_flux_superposition(comp_state({r, r, r}));
        return reg;
      },
      [&](Register& reg) {
        SlotId f = reg.slot_ids().front();
        for (int round = 0; round < 2; ++round) {
          SlotId c = reg.add_vacuum_charge(rep);
          reg.apply_charge_braiding(c, Side::kLeft, extract_a(), {f});
          if (reg.fuse_charge_pair(c, sign).damaged) return 0;
        }
        return 1;
      });
  double total = 0;
  int hits = 0;
  for (const auto& b : branches) {
    total += b.probability;
    if (b.result == 1) {
      ++hits;
      EXPECT_NEAR(b.probability, 3.0 / 8, 1e-12);
      const double s2 = 1 / std::sqrt(2.0);
      SlotId f = b.final_register.slot_ids().front();
      EXPECT_NEAR(fidelity(b.final_register, {f}, comp_terms({0, s2, s2})), 1.0, 1e-12);
    }
  }
  EXPECT_EQ(hits, 1);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(sim, fidelity_ignores_global_phase) {
  Register reg(s3());
  const double s2 = 1 / std::sqrt(2.0);
  SlotId s = reg.add_flux_superposition(comp_state({0, s2, s2}));
  const cplx i(0, 1);
  EXPECT_NEAR(fidelity(reg, {s}, comp_terms({0, i * s2, i * s2})), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(reg, {s}, comp_terms({1, 0, 0})), 0.0, 1e-12);
  EXPECT_THROW(fidelity(reg, {s}, {{{1, 2}, 1.0}}), SimError);
}

TEST(sim, seeded_runs_are_reproducible) {
  auto run = [](std::uint64_t seed) {
    RegisterConfig cfg;
    cfg.seed = seed;
    cfg.failure = FailurePolicy::kUnravel;
    Register reg(s3(), cfg);
    SlotId s = reg.add_vacuum_flux(b_el());
    for (int k = 0; k < 6; ++k) {
      reg.fuse_with_flux_ancilla(s, b_el());
      if (!reg.has_slot(s)) s = reg.add_vacuum_flux(b_el());
    }
    return reg.to_json();
  };
  EXPECT_EQ(run(11), run(11));
  EXPECT_NE(run(11).find("transcript"), std::string::npos);
}

TEST(sim, unitary_ops_preserve_norm_and_class) {
  auto g = s3();
  Register reg(g);
  SlotId x = reg.add_vacuum_flux(b_el());
  SlotId y = reg.add_flux_superposition(comp_state({0.6, 0.8, 0}));
  const ConjWord w = ConjWord::commutator(ConjWord::arg(0), ConjWord::constant(a_el()));
  for (int k = 0; k < 5; ++k) {
    reg.apply_conjugation(y, w, {x});
    reg.apply_conjugation(x, ConjWord::arg(0) * ConjWord::constant(a_el()), {y});
    EXPECT_NEAR(reg.norm2(), 1.0, 1e-12);
    for (SlotId s : {x, y})
      for (auto v : reg.support(s)) EXPECT_TRUE(contains(reg.slot(s).cls, v));
  }
}

TEST(sim, reduced_terms_detects_entanglement) {
  Register reg(s3());
  SlotId c = reg.add_vacuum_flux(b_el());
  SlotId t = reg.add_flux(comp(kS3, 0));
  EXPECT_EQ(reg.reduced_terms({t}).size(), 1u);
  reg.apply_conjugation(t, (ConjWord::arg(0) * ConjWord::constant(b_el()).inverse()).pow(2), {c});
  EXPECT_THROW(reg.reduced_terms({t}), SimError);
  EXPECT_EQ(reg.reduced_terms({c, t}).size(), 3u);
}

TEST(sim, measure_and_discard) {
  Register reg(s3());
  const double s2 = 1 / std::sqrt(2.0);
  SlotId s = reg.add_flux_superposition(comp_state({s2, s2, 0}));
  SlotId t = reg.add_reference(3, 2);
  reg.set_chooser([](const std::vector<double>& p, const std::string&) {
    EXPECT_NEAR(p[0], 0.5, 1e-12);
    EXPECT_NEAR(p[1], 0.5, 1e-12);
    return std::size_t{1};
  });
  std::size_t k = reg.measure_slot(s, {{{comp(kS3, 0), 1.0}}}, "z", false);
  EXPECT_EQ(k, 1u);
  EXPECT_EQ(reg.support(s), (std::vector<std::uint32_t>{comp(kS3, 1)}));
  reg.set_chooser(nullptr);
  reg.discard(s);
  EXPECT_FALSE(reg.has_slot(s));
  EXPECT_EQ(reg.support(t), (std::vector<std::uint32_t>{2}));
}
