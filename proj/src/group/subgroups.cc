#include <algorithm>
#include <deque>
#include <set>

#include "anyon/group.h"

namespace anyon {

std::vector<ConjugacyClass> conjugacy_classes(const Group& g) {
  const std::size_t n = g.order();
  std::vector<char> done(n);
  std::vector<ConjugacyClass> out;
  for (Element x = 0; x < n; ++x) {
    if (done[x]) continue;
    std::set<Element> members;
    for (Element y = 0; y < n; ++y) members.insert(g.conj(y, x));
    ConjugacyClass c;
    c.members.assign(members.begin(), members.end());
    c.representative = c.members.front();
    for (Element m : c.members) done[m] = 1;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> class_index(const Group& g, const std::vector<ConjugacyClass>& classes) {
  std::vector<int> idx(g.order(), -1);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (Element m : classes[c].members) idx[m] = static_cast<int>(c);
  return idx;
}

Subgroup closure(const Group& g, const std::vector<Element>& generators) {
  std::vector<char> in(g.order());
  std::vector<Element> elems{0};
  in[0] = 1;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (Element s : generators) {
      Element y = g.mul(elems[i], s);
      if (!in[y]) {
        in[y] = 1;
        elems.push_back(y);
      }
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

bool contains(const Subgroup& s, Element x) { return std::binary_search(s.begin(), s.end(), x); }

bool is_subgroup(const Group& g, const Subgroup& s) {
  if (s.empty() || !contains(s, 0)) return false;
  for (Element x : s)
    for (Element y : s)
      if (!contains(s, g.mul(x, y))) return false;
  return true;
}

bool is_normal(const Group& g, const Subgroup& s) {
  if (!is_subgroup(g, s)) return false;
  for (Element x = 0; x < g.order(); ++x)
    for (Element h : s)
      if (!contains(s, g.conj(x, h))) return false;
  return true;
}

Subgroup commutator_subgroup(const Group& g, const Subgroup& a, const Subgroup& b) {
  if (!is_subgroup(g, a) || !is_subgroup(g, b)) throw GroupError("commutator arguments must be subgroups");
  std::set<Element> gens;
  for (Element x : a)
    for (Element y : b) gens.insert(g.comm(x, y));
  return closure(g, std::vector<Element>(gens.begin(), gens.end()));
}

Subgroup normal_closure(const Group& g, Element x) {
  std::set<Element> cls;
  for (Element y = 0; y < g.order(); ++y) cls.insert(g.conj(y, x));
  return closure(g, std::vector<Element>(cls.begin(), cls.end()));
}

Subgroup whole(const Group& g) {
  Subgroup s(g.order());
  for (Element x = 0; x < g.order(); ++x) s[x] = x;
  return s;
}

Subgroup trivial_subgroup() { return {0}; }

Subgroup centralizer(const Group& g, const Subgroup& of, const Subgroup& within) {
  Subgroup out;
  for (Element x : within) {
    bool ok = true;
    for (Element h : of)
      if (!g.commute(x, h)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(x);
  }
  return out;
}

SeriesChain series(const Group& g, SeriesKind kind) {
  SeriesChain s;
  s.kind = kind;
  Subgroup all = whole(g);
  s.chain.push_back(all);
  while (true) {
    const Subgroup& cur = s.chain.back();
    Subgroup next = commutator_subgroup(g, cur, kind == SeriesKind::kDerived ? cur : all);
    if (next == cur) break;
    s.chain.push_back(std::move(next));
  }
  s.limit = s.chain.back();
  return s;
}

const char* power_name(Power p) {
  switch (p) {
    case Power::kIdentity: return "I";
    case Power::kX: return "X";
    case Power::kCX: return "CX";
    case Power::kToffoli: return "Toffoli";
  }
  return "?";
}

Classification classify(const Group& g) {
  Classification c;
  c.abelian = conjugacy_classes(g).size() == g.order();
  c.nilpotent = series(g, SeriesKind::kExhaustive).limit.size() == 1;
  c.solvable = series(g, SeriesKind::kDerived).limit.size() == 1;
  if (c.abelian)
    c.power = Power::kIdentity;
  else if (c.nilpotent)
    c.power = Power::kX;
  else if (c.solvable)
    c.power = Power::kCX;
  else
    c.power = Power::kToffoli;
  return c;
}

std::vector<Subgroup> normal_subgroups(const Group& g, std::size_t bound) {
  if (g.order() > bound) throw GroupError("group order exceeds the normal-subgroup enumeration bound");
  auto classes = conjugacy_classes(g);
  std::set<Subgroup> found{trivial_subgroup()};
  std::deque<Subgroup> queue{trivial_subgroup()};
  while (!queue.empty()) {
    Subgroup cur = queue.front();
    queue.pop_front();
    for (const auto& c : classes) {
      if (contains(cur, c.representative)) continue;
      std::vector<Element> gens = cur;
      gens.insert(gens.end(), c.members.begin(), c.members.end());
      Subgroup next = closure(g, gens);
      if (found.insert(next).second) queue.push_back(std::move(next));
    }
  }
  std::vector<Subgroup> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

Quotient quotient(const Group& g, const Subgroup& n) {
  if (!is_normal(g, n)) throw GroupError("quotient by a non-normal subgroup");
  Quotient q;
  const std::size_t order = g.order();
  q.projection.assign(order, 0);
  std::vector<char> assigned(order);
  for (Element x = 0; x < order; ++x) {
    if (assigned[x]) continue;
    Element idx = static_cast<Element>(q.lift.size());
    q.lift.push_back(x);
    for (Element h : n) {
      Element y = g.mul(x, h);
      assigned[y] = 1;
      q.projection[y] = idx;
    }
  }
  const std::size_t m = q.lift.size();
  std::vector<std::vector<Element>> t(m, std::vector<Element>(m));
  for (Element a = 0; a < m; ++a)
    for (Element b = 0; b < m; ++b) t[a][b] = q.projection[g.mul(q.lift[a], q.lift[b])];
  q.group = Group::from_table(g.label() + "/N" + std::to_string(n.size()), t);
  return q;
}

Group subgroup_as_group(const Group& g, const Subgroup& s, std::string label) {
  if (!is_subgroup(g, s)) throw GroupError("not a subgroup");
  std::vector<std::vector<Element>> t(s.size(), std::vector<Element>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      Element v = g.mul(s[i], s[j]);
      t[i][j] = static_cast<Element>(std::lower_bound(s.begin(), s.end(), v) - s.begin());
    }
  return Group::from_table(label, t);
}

}  // namespace anyon
