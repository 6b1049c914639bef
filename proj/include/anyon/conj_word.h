#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "anyon/group.h"

namespace anyon {

// A word in constants and argument slots, evaluated in a Group. Used as the
// conjugating element f(g_1, ..., g_k) of controlled braids.
class ConjWord {
 public:
  enum class Kind { kConst, kArg, kInverse, kProduct, kCommutator };

  ConjWord();  // empty product: the identity
  static ConjWord constant(Element e);
  static ConjWord arg(int slot);
  static ConjWord product(std::vector<ConjWord> factors);
  static ConjWord commutator(const ConjWord& x, const ConjWord& y);

  ConjWord inverse() const;
  ConjWord operator*(const ConjWord& rhs) const;
  ConjWord pow(long long k) const;
  // c w c^-1
  ConjWord conjugated_by(Element c) const;
  // Replaces every Arg(slot) with `inner`.
  ConjWord substitute(int slot, const ConjWord& inner) const;
  // Renumbers argument slots: Arg(i) -> Arg(map[i]).
  ConjWord remap(const std::vector<int>& map) const;

  Element eval(const Group& g, std::span<const Element> args) const;
  // Number of argument slots referenced (max slot + 1).
  int arity() const;
  Kind kind() const;
  std::string to_string() const;

 private:
  struct Node;
  explicit ConjWord(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
};

}  // namespace anyon
