#include "anyon/conj_word.h"

#include <algorithm>

namespace anyon {

struct ConjWord::Node {
  Kind kind = Kind::kProduct;
  Element value = 0;  // kConst
  int slot = 0;       // kArg
  std::vector<ConjWord> kids;
};

ConjWord::ConjWord() : node_(std::make_shared<Node>()) {}
ConjWord::ConjWord(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

ConjWord ConjWord::constant(Element e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConst;
  n->value = e;
  return ConjWord(n);
}

ConjWord ConjWord::arg(int slot) {
  if (slot < 0) throw GroupError("negative argument slot");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kArg;
  n->slot = slot;
  return ConjWord(n);
}

ConjWord ConjWord::product(std::vector<ConjWord> factors) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kProduct;
  for (auto& f : factors) {
    if (f.node_->kind == Kind::kProduct)
      n->kids.insert(n->kids.end(), f.node_->kids.begin(), f.node_->kids.end());
    else
      n->kids.push_back(std::move(f));
  }
  if (n->kids.size() == 1) return n->kids[0];
  return ConjWord(n);
}

ConjWord ConjWord::commutator(const ConjWord& x, const ConjWord& y) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kCommutator;
  n->kids = {x, y};
  return ConjWord(n);
}

ConjWord ConjWord::inverse() const {
  switch (node_->kind) {
    case Kind::kInverse:
      return node_->kids[0];
    case Kind::kProduct: {
      std::vector<ConjWord> r;
      for (auto it = node_->kids.rbegin(); it != node_->kids.rend(); ++it) r.push_back(it->inverse());
      return product(std::move(r));
    }
    default: {
      auto n = std::make_shared<Node>();
      n->kind = Kind::kInverse;
      n->kids = {*this};
      return ConjWord(n);
    }
  }
}

ConjWord ConjWord::operator*(const ConjWord& rhs) const { return product({*this, rhs}); }

ConjWord ConjWord::pow(long long k) const {
  if (k < 0) return inverse().pow(-k);
  std::vector<ConjWord> f(static_cast<std::size_t>(k), *this);
  return product(std::move(f));
}

ConjWord ConjWord::conjugated_by(Element c) const {
  return product({constant(c), *this, constant(c).inverse()});
}

ConjWord ConjWord::substitute(int slot, const ConjWord& inner) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConst:
      return *this;
    case Kind::kArg:
      return n.slot == slot ? inner : *this;
    case Kind::kInverse:
      return n.kids[0].substitute(slot, inner).inverse();
    case Kind::kCommutator:
      return commutator(n.kids[0].substitute(slot, inner), n.kids[1].substitute(slot, inner));
    case Kind::kProduct: {
      std::vector<ConjWord> r;
      for (const auto& k : n.kids) r.push_back(k.substitute(slot, inner));
      return product(std::move(r));
    }
  }
  return *this;
}

ConjWord ConjWord::remap(const std::vector<int>& map) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConst:
      return *this;
    case Kind::kArg:
      if (n.slot >= static_cast<int>(map.size())) throw GroupError("remap misses an argument slot");
      return arg(map[n.slot]);
    case Kind::kInverse:
      return n.kids[0].remap(map).inverse();
    case Kind::kCommutator:
      return commutator(n.kids[0].remap(map), n.kids[1].remap(map));
    case Kind::kProduct: {
      std::vector<ConjWord> r;
      for (const auto& k : n.kids) r.push_back(k.remap(map));
      return product(std::move(r));
    }
  }
  return *this;
}

Element ConjWord::eval(const Group& g, std::span<const Element> args) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConst:
      return n.value;
    case Kind::kArg:
      if (n.slot >= static_cast<int>(args.size())) throw GroupError("unbound argument slot in word");
      return args[n.slot];
    case Kind::kInverse:
      return g.inv(n.kids[0].eval(g, args));
    case Kind::kCommutator:
      return g.comm(n.kids[0].eval(g, args), n.kids[1].eval(g, args));
    case Kind::kProduct: {
      Element r = 0;
      for (const auto& k : n.kids) r = g.mul(r, k.eval(g, args));
      return r;
    }
  }
  return 0;
}

int ConjWord::arity() const {
  const Node& n = *node_;
  if (n.kind == Kind::kArg) return n.slot + 1;
  int a = 0;
  for (const auto& k : n.kids) a = std::max(a, k.arity());
  return a;
}

ConjWord::Kind ConjWord::kind() const { return node_->kind; }

std::string ConjWord::to_string() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kConst:
      return "c" + std::to_string(n.value);
    case Kind::kArg:
      return "g" + std::to_string(n.slot);
    case Kind::kInverse:
      return "(" + n.kids[0].to_string() + ")^-1";
    case Kind::kCommutator:
      return "[" + n.kids[0].to_string() + ", " + n.kids[1].to_string() + "]";
    case Kind::kProduct: {
      if (n.kids.empty()) return "1";
      std::string s;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) s += " ";
        s += n.kids[i].to_string();
      }
      return s;
    }
  }
  return "?";
}

}  // namespace anyon
