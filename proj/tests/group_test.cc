#include <gtest/gtest.h>

#include <algorithm>

#include "anyon/conj_word.h"
#include "anyon/decomposition.h"
#include "anyon/group.h"

using namespace anyon;

namespace {

Group s3() { return semidirect_pq({3, 2, 2}); }
Group z7z3() { return semidirect_pq({7, 3, 2}); }

std::vector<std::size_t> class_sizes(const Group& g) {
  std::vector<std::size_t> s;
  for (const auto& c : conjugacy_classes(g)) s.push_back(c.members.size());
  std::sort(s.begin(), s.end());
  return s;
}

void expect_group_axioms(const Group& g) {
  for (Element a = 0; a < g.order(); ++a) {
    EXPECT_EQ(g.mul(a, g.inv(a)), 0u);
    EXPECT_EQ(g.mul(g.inv(a), a), 0u);
    for (Element b = 0; b < g.order(); ++b)
      for (Element c = 0; c < g.order(); ++c) ASSERT_EQ(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
  }
}

}  // namespace

TEST(group, semidirect_pq_is_s3) {
  Group g = s3();
  EXPECT_EQ(g.order(), 6u);
  expect_group_axioms(g);
  Element a = sdp_element({3, 2, 2}, 1, 0), b = sdp_element({3, 2, 2}, 0, 1);
  EXPECT_EQ(g.conj(b, a), g.pow(a, 2));
  EXPECT_EQ(class_sizes(g), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(group, trivial_and_cyclic) {
  Group g = cyclic(1);
  EXPECT_EQ(g.order(), 1u);
  EXPECT_EQ(class_sizes(cyclic(5)).size(), 5u);
}

TEST(group, rejects_bad_tables_and_specs) {
  EXPECT_THROW(Group::from_table("x", {{0, 1}, {1, 1}}), GroupError);
  EXPECT_THROW(Group::from_table("x", {{1, 0}, {0, 1}}), GroupError);
  // non-associative Latin square with identity
  std::vector<std::vector<Element>> t = {{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3},
                                         {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  EXPECT_THROW(Group::from_table("loop", t), GroupError);
  EXPECT_THROW(semidirect_pq({3, 2, 1}), GroupError);
  EXPECT_THROW(semidirect_pq({7, 3, 3}), GroupError);
  Group z3 = cyclic(3), z2 = cyclic(2);
  EXPECT_THROW(semidirect(z3, z2, {{0, 1, 2}, {0, 1, 1}}), GroupError);
}

TEST(group, a4_fixture) {
  Group g = named_group("a4");
  EXPECT_EQ(g.order(), 12u);
  expect_group_axioms(g);
  auto gens = named_generators("a4");
  Element a1 = gens.normal[0], a2 = gens.normal[1], b = gens.acting[0];
  // b a1^i a2^j b^-1 = a1^j a2^(i+j)
  for (unsigned i = 0; i < 2; ++i)
    for (unsigned j = 0; j < 2; ++j) {
      Element x = g.mul(g.pow(a1, i), g.pow(a2, j));
      Element y = g.mul(g.pow(a1, j), g.pow(a2, i + j));
      EXPECT_EQ(g.conj(b, x), y);
    }
}

TEST(group, z7z3_classes) {
  Group g = z7z3();
  SemidirectSpec s{7, 3, 2};
  auto cls = conjugacy_classes(g);
  auto idx = class_index(g, cls);
  auto a = [&](unsigned i) { return sdp_element(s, i, 0); };
  EXPECT_EQ(idx[a(1)], idx[a(2)]);
  EXPECT_EQ(idx[a(1)], idx[a(4)]);
  EXPECT_EQ(idx[a(3)], idx[a(5)]);
  EXPECT_EQ(idx[a(3)], idx[a(6)]);
  EXPECT_NE(idx[a(1)], idx[a(3)]);
  EXPECT_EQ(class_sizes(g), (std::vector<std::size_t>{1, 3, 3, 7, 7}));
}

TEST(group, classes_partition_and_are_closed) {
  for (const auto& g : {s3(), z7z3(), named_group("a4"), alternating(5), quaternion()}) {
    auto cls = conjugacy_classes(g);
    std::size_t total = 0;
    Element last_rep = 0;
    for (std::size_t c = 0; c < cls.size(); ++c) {
      total += cls[c].members.size();
      if (c) EXPECT_GT(cls[c].representative, last_rep);
      last_rep = cls[c].representative;
      for (Element m : cls[c].members)
        for (Element x = 0; x < g.order(); ++x) EXPECT_TRUE(contains(cls[c].members, g.conj(x, m)));
    }
    EXPECT_EQ(total, g.order());
  }
}

TEST(group, commutators_and_closures) {
  Group g = s3();
  EXPECT_EQ(commutator_subgroup(g, whole(g), whole(g)), (Subgroup{0, 1, 2}));
  EXPECT_EQ(commutator_subgroup(g, whole(g), trivial_subgroup()), trivial_subgroup());
  Group a4 = named_group("a4");
  EXPECT_EQ(commutator_subgroup(a4, whole(a4), whole(a4)).size(), 4u);
  EXPECT_EQ(normal_closure(g, 1), (Subgroup{0, 1, 2}));
  EXPECT_EQ(normal_closure(g, 0), trivial_subgroup());
  EXPECT_EQ(normal_closure(z7z3(), 1).size(), 7u);
  EXPECT_THROW(commutator_subgroup(g, {0, 3, 1}, whole(g)), GroupError);
}

TEST(group, series) {
  auto ex = series(s3(), SeriesKind::kExhaustive);
  ASSERT_EQ(ex.chain.size(), 2u);
  EXPECT_EQ(ex.limit, (Subgroup{0, 1, 2}));
  auto d5 = series(cyclic(5), SeriesKind::kDerived);
  EXPECT_EQ(d5.chain.size(), 2u);
  EXPECT_EQ(d5.limit, trivial_subgroup());
  Group a5 = alternating(5);
  EXPECT_EQ(a5.order(), 60u);
  EXPECT_EQ(series(a5, SeriesKind::kDerived).limit.size(), 60u);
}

TEST(group, table_one) {
  auto z2 = classify(cyclic(2));
  EXPECT_TRUE(z2.abelian && z2.nilpotent && z2.solvable);
  EXPECT_EQ(z2.power, Power::kIdentity);
  auto q = classify(quaternion());
  EXPECT_TRUE(!q.abelian && q.nilpotent && q.solvable);
  EXPECT_EQ(q.power, Power::kX);
  auto s = classify(s3());
  EXPECT_TRUE(!s.abelian && !s.nilpotent && s.solvable);
  EXPECT_EQ(s.power, Power::kCX);
  EXPECT_EQ(classify(alternating(5)).power, Power::kToffoli);
}

TEST(group, series_limits_agree_with_classification) {
  for (const auto& g : {cyclic(6), quaternion(), s3(), z7z3(), named_group("a4"), dihedral(4), symmetric(4),
                        named_group("z3z3_q8"), named_group("z3z3_d4"), named_group("z3z3_z3z2")}) {
    auto c = classify(g);
    if (c.nilpotent) EXPECT_TRUE(c.solvable) << g.label();
    EXPECT_EQ(c.solvable, series(g, SeriesKind::kDerived).limit.size() == 1);
  }
}

TEST(group, normal_subgroups) {
  auto ns = normal_subgroups(s3());
  ASSERT_EQ(ns.size(), 3u);
  EXPECT_EQ(ns[1], (Subgroup{0, 1, 2}));
  EXPECT_EQ(normal_subgroups(cyclic(7)).size(), 2u);
  auto na4 = normal_subgroups(named_group("a4"));
  ASSERT_EQ(na4.size(), 3u);
  EXPECT_EQ(na4[1].size(), 4u);
  EXPECT_THROW(normal_subgroups(s3(), 5), GroupError);
}

TEST(group, quotients) {
  auto q = quotient(s3(), {0, 1, 2});
  EXPECT_EQ(q.group.order(), 2u);
  EXPECT_EQ(q.projection[0], 0u);
  auto id = quotient(s3(), trivial_subgroup());
  EXPECT_TRUE(id.group.same_table(s3()));
  EXPECT_THROW(quotient(s3(), {0, 3}), GroupError);
  Group g = named_group("z3z3_z3z2");
  auto gens = named_generators("z3z3_z3z2");
  Element n = g.mul(gens.normal[0], g.inv(gens.normal[1]));
  Subgroup N = closure(g, {n});
  auto qq = quotient(g, N);
  EXPECT_EQ(qq.group.order(), 18u);
}

TEST(conj_word, evaluation) {
  Group g = s3();
  Element a = 1, b = 3;
  auto w = ConjWord::constant(a) * ConjWord::arg(0) * ConjWord::constant(b);
  EXPECT_EQ(w.eval(g, std::vector<Element>{4}), g.mul(g.mul(a, 4), b));
  EXPECT_THROW(w.eval(g, std::vector<Element>{}), GroupError);
  // [g b^-1, b] recovers h from h b h^-1
  auto f = ConjWord::commutator(ConjWord::arg(0) * ConjWord::constant(b).inverse(), ConjWord::constant(b));
  auto p2 = (ConjWord::arg(0) * ConjWord::constant(b).inverse()).pow(2);
  for (unsigned x = 0; x < 3; ++x) {
    Element h = g.pow(a, x);
    Element flux = g.conj(h, b);
    EXPECT_EQ(f.eval(g, std::vector<Element>{flux}), h);
    EXPECT_EQ(p2.eval(g, std::vector<Element>{flux}), h);
  }
  EXPECT_EQ(ConjWord().eval(g, std::vector<Element>{}), 0u);
  EXPECT_EQ(ConjWord::arg(0).pow(3).inverse().eval(g, std::vector<Element>{1}), 0u);
  auto sub = f.substitute(0, ConjWord::constant(b));
  EXPECT_EQ(sub.arity(), 0);
  EXPECT_EQ(sub.eval(g, std::vector<Element>{}), 0u);
}

TEST(decompose, s3) {
  auto d = decompose(s3());
  EXPECT_EQ(d.N, trivial_subgroup());
  EXPECT_EQ(d.H_tilde.size(), 3u);
  EXPECT_EQ(d.p(), 3);
  EXPECT_EQ(d.n(), 1);
  EXPECT_EQ(d.q, 2u);
  EXPECT_EQ(d.Gt().element_order(d.b), 2u);
  EXPECT_EQ(d.period_l, 2u);
  EXPECT_EQ(d.lam.lambda.size(), 3u);
  EXPECT_EQ(d.phi_set.size(), 2u);
}

TEST(decompose, a4) {
  auto d = decompose(named_group("a4"));
  EXPECT_EQ(d.N, trivial_subgroup());
  EXPECT_EQ(d.p(), 2);
  EXPECT_EQ(d.n(), 2);
  EXPECT_EQ(d.q, 3u);
  EXPECT_EQ(d.lam.lambda.size(), 4u);
}

TEST(decompose, z3z3_z3z2) {
  Group g = named_group("z3z3_z3z2");
  auto gens = named_generators("z3z3_z3z2");
  auto d = decompose(g);
  Subgroup expected = closure(g, {g.mul(gens.normal[0], g.inv(gens.normal[1]))});
  EXPECT_EQ(d.N, expected);
  EXPECT_EQ(d.H_tilde.size(), 3u);
  EXPECT_EQ(d.q, 2u);
  EXPECT_EQ(d.Gt().order(), 18u);
}

TEST(decompose, z3z3_q8_and_d4_classes) {
  for (const std::string name : {"z3z3_q8", "z3z3_d4"}) {
    Group g = named_group(name);
    auto d = decompose(g);
    EXPECT_EQ(d.N, trivial_subgroup()) << name;
    EXPECT_EQ(d.H_tilde.size(), 9u) << name;
    auto idx = class_index(g, conjugacy_classes(g));
    std::set<int> hc;
    for (Element h : d.H) hc.insert(idx[h]);
    EXPECT_EQ(hc.size(), name == "z3z3_q8" ? 2u : 3u) << name;
  }
}

TEST(decompose, invariants_hold_on_fixtures) {
  std::vector<Group> gs = {s3(), z7z3(), semidirect_pq({5, 2, 4}), semidirect_pq({13, 3, 3})};
  for (const auto& n : named_groups()) gs.push_back(named_group(n));
  for (const auto& g : gs) {
    auto d = decompose(g);
    const Group& gt = d.Gt();
    // no non-identity fixed point of [b, .]
    for (Element h : d.H_tilde)
      if (h != 0) EXPECT_NE(gt.comm(d.b, h), 0u) << g.label();
    EXPECT_NE((gt.order() / d.S_tilde.size()) % d.p(), 0u);
    EXPECT_TRUE(contains(d.lam.lambda, d.a_star));
    EXPECT_EQ(d.lam.lambda.at(1), d.a_star);
    EXPECT_TRUE(is_balanced(d, d.phi_set, d.lam.lambda));
    // witness words agree with the linear action
    for (const auto& phi : d.phi_set)
      for (Element h : d.H_tilde) {
        Element want = d.hspace.element(fp::apply(phi.matrix, d.hspace.coords(h), d.p()));
        EXPECT_EQ(phi.word.eval(gt, std::vector<Element>{h}), want);
      }
    for (std::size_t k = 0; k < d.lam.killers.size(); ++k)
      for (Element h : d.H_tilde) {
        Element want = d.hspace.element(fp::apply(d.lam.killers[k], d.hspace.coords(h), d.p()));
        EXPECT_EQ(d.lam.killer_witness[k].word().eval(gt, std::vector<Element>{h}), want);
      }
  }
}

TEST(decompose, lambda_matches_brute_force) {
  // Enumerate the whole algebra and intersect the kernels of everything that kills a.
  for (const std::string name : {"z3z3_q8", "z3z3_d4", "a4"}) {
    auto d = decompose(named_group(name));
    const int p = d.p(), n = d.n();
    std::set<std::vector<int>> algebra{fp::Mat(n, n).a};
    for (bool grew = true; grew;) {
      grew = false;
      auto snapshot = algebra;
      for (const auto& m : snapshot)
        for (const auto& r : d.rho) {
          fp::Mat x(n, n);
          x.a = m;
          auto y = fp::add(x, r, p).a;
          if (algebra.insert(y).second) grew = true;
        }
    }
    for (Element a : d.H_tilde) {
      if (a == 0) continue;
      Subgroup lam;
      for (Element l : d.H_tilde) {
        bool ok = true;
        for (const auto& m : algebra) {
          fp::Mat x(n, n);
          x.a = m;
          if (fp::is_zero(fp::apply(x, d.hspace.coords(a), p)) && !fp::is_zero(fp::apply(x, d.hspace.coords(l), p)))
            ok = false;
        }
        if (ok) lam.push_back(l);
      }
      EXPECT_EQ(compute_lambda(d, a).lambda, lam) << name << " a=" << a;
    }
  }
}

TEST(decompose, z7z3_maps_are_powers) {
  auto d = decompose(z7z3());
  EXPECT_EQ(d.phi_set.size(), 6u);
  std::set<int> powers;
  for (const auto& phi : d.phi_set) powers.insert(phi.matrix.at(0, 0));
  EXPECT_EQ(powers, (std::set<int>{1, 2, 3, 4, 5, 6}));
}

TEST(decompose, rejects_nilpotent) {
  EXPECT_THROW(decompose(quaternion()), GroupError);
  EXPECT_THROW(decompose(alternating(5)), GroupError);
}
