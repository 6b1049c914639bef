#pragma once

// Text syntax for groups:
//   spec := term (('x' | '⋊(t=' int ')' | 'xsd(t=' int ')') term)*
//   term := 'Z' int | 'S' int | 'A' int | 'D' int | 'Q8' | identifier | '(' spec ')'
// 'x' is the direct product. A semidirect annotation is only defined between
// two cyclic factors of prime order. Identifiers name the built-in fixtures.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "anyon/group.h"

namespace anyon {

class SpecError : public std::runtime_error {
 public:
  SpecError(std::size_t pos, const std::string& msg)
      : std::runtime_error("at offset " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

struct GroupSpecAST {
  enum class Kind { kCyclic, kSymmetric, kAlternating, kDihedral, kQuaternion, kDirectProduct, kSemidirectPQ, kNamed };
  Kind kind = Kind::kCyclic;
  unsigned n = 0;               // order parameter of the primitive kinds
  SemidirectSpec pq;            // kSemidirectPQ
  std::string name;             // kNamed
  std::vector<GroupSpecAST> factors;  // kDirectProduct
};

GroupSpecAST parse_group_spec(const std::string& text);
// Canonical text; parse(print(x)) == x. `ascii` writes 'xsd(t=..)' for '⋊'.
std::string print_group_spec(const GroupSpecAST& ast, bool ascii = false);
bool operator==(const GroupSpecAST& a, const GroupSpecAST& b);
Group build_group(const GroupSpecAST& ast);

}  // namespace anyon
