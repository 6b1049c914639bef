#include "anyon/group_spec.h"

#include <algorithm>
#include <cctype>

namespace anyon {

namespace {

const std::string kSdp = "\xE2\x8B\x8A";  // U+22CA

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  GroupSpecAST parse() {
    GroupSpecAST g = spec();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_, 1) + "'");
    return g;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw SpecError(pos_, msg); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!eat(tok)) fail("expected '" + tok + "'");
  }
  unsigned integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    if (pos_ - start > 6) {
      pos_ = start;
      fail("integer too large");
    }
    return static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start)));
  }

  GroupSpecAST spec() {
    GroupSpecAST lhs = term();
    for (;;) {
      skip();
      const std::size_t at = pos_;
      if (eat(kSdp) || eat("xsd")) {
        expect("(");
        expect("t=");
        const unsigned t = integer();
        expect(")");
        GroupSpecAST rhs = term();
        if (lhs.kind != GroupSpecAST::Kind::kCyclic || rhs.kind != GroupSpecAST::Kind::kCyclic) {
          pos_ = at;
          fail("semidirect annotation needs cyclic factors Zp and Zq");
        }
        GroupSpecAST node;
        node.kind = GroupSpecAST::Kind::kSemidirectPQ;
        node.pq = {lhs.n, rhs.n, t};
        try {
          node.pq.validate();
        } catch (const GroupError& e) {
          pos_ = at;
          fail(std::string("invalid semidirect product: ") + e.what());
        }
        lhs = node;
      } else if (eat("x")) {
        GroupSpecAST rhs = term();
        if (lhs.kind != GroupSpecAST::Kind::kDirectProduct) {
          GroupSpecAST node;
          node.kind = GroupSpecAST::Kind::kDirectProduct;
          node.factors.push_back(lhs);
          lhs = node;
        }
        // direct products are associative: keep one flat factor list
        if (rhs.kind == GroupSpecAST::Kind::kDirectProduct)
          lhs.factors.insert(lhs.factors.end(), rhs.factors.begin(), rhs.factors.end());
        else
          lhs.factors.push_back(rhs);
      } else {
        return lhs;
      }
    }
  }

  GroupSpecAST term() {
    skip();
    GroupSpecAST g;
    if (eat("(")) {
      g = spec();
      expect(")");
      return g;
    }
    if (eat("Q8")) {
      g.kind = GroupSpecAST::Kind::kQuaternion;
      g.n = 8;
      return g;
    }
    if (pos_ < s_.size() && std::islower(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      g.kind = GroupSpecAST::Kind::kNamed;
      g.name = s_.substr(start, pos_ - start);
      const auto names = named_groups();
      if (std::find(names.begin(), names.end(), g.name) == names.end()) {
        pos_ = start;
        fail("unknown named group '" + g.name + "'");
      }
      return g;
    }
    const std::size_t at = pos_;
    const char c = pos_ < s_.size() ? s_[pos_] : '\0';
    switch (c) {
      case 'Z': g.kind = GroupSpecAST::Kind::kCyclic; break;
      case 'S': g.kind = GroupSpecAST::Kind::kSymmetric; break;
      case 'A': g.kind = GroupSpecAST::Kind::kAlternating; break;
      case 'D': g.kind = GroupSpecAST::Kind::kDihedral; break;
      default: fail("expected a group term");
    }
    ++pos_;
    g.n = integer();
    const unsigned lo = g.kind == GroupSpecAST::Kind::kCyclic ? 1 : g.kind == GroupSpecAST::Kind::kDihedral ? 3 : 2;
    const unsigned hi = g.kind == GroupSpecAST::Kind::kCyclic || g.kind == GroupSpecAST::Kind::kDihedral ? 4096 : 6;
    if (g.n < lo || g.n > hi) {
      pos_ = at;
      fail("parameter " + std::to_string(g.n) + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return g;
  }
};

}  // namespace

GroupSpecAST parse_group_spec(const std::string& text) { return Parser(text).parse(); }

std::string print_group_spec(const GroupSpecAST& g, bool ascii) {
  using K = GroupSpecAST::Kind;
  switch (g.kind) {
    case K::kCyclic: return "Z" + std::to_string(g.n);
    case K::kSymmetric: return "S" + std::to_string(g.n);
    case K::kAlternating: return "A" + std::to_string(g.n);
    case K::kDihedral: return "D" + std::to_string(g.n);
    case K::kQuaternion: return "Q8";
    case K::kNamed: return g.name;
    case K::kSemidirectPQ:
      return "Z" + std::to_string(g.pq.p) + (ascii ? "xsd" : kSdp) + "(t=" + std::to_string(g.pq.t) + ")Z" +
             std::to_string(g.pq.q);
    case K::kDirectProduct: {
      std::string out;
      for (std::size_t i = 0; i < g.factors.size(); ++i) {
        const auto& f = g.factors[i];
        const bool wrap = f.kind == K::kSemidirectPQ;
        out += (i ? "x" : "") + (wrap ? "(" + print_group_spec(f, ascii) + ")" : print_group_spec(f, ascii));
      }
      return out;
    }
  }
  return "";
}

bool operator==(const GroupSpecAST& a, const GroupSpecAST& b) {
  if (a.kind != b.kind || a.n != b.n || a.name != b.name || a.factors != b.factors) return false;
  return a.kind != GroupSpecAST::Kind::kSemidirectPQ || (a.pq.p == b.pq.p && a.pq.q == b.pq.q && a.pq.t == b.pq.t);
}

Group build_group(const GroupSpecAST& g) {
  using K = GroupSpecAST::Kind;
  Group out;
  switch (g.kind) {
    case K::kCyclic: out = cyclic(g.n); break;
    case K::kSymmetric: out = symmetric(g.n); break;
    case K::kAlternating: out = alternating(g.n); break;
    case K::kDihedral: out = dihedral(g.n); break;
    case K::kQuaternion: out = quaternion(); break;
    case K::kNamed: out = named_group(g.name); break;
    case K::kSemidirectPQ: out = semidirect_pq(g.pq); break;
    case K::kDirectProduct: {
      std::vector<Group> parts;
      std::size_t order = 1;
      for (const auto& f : g.factors) {
        parts.push_back(build_group(f));
        order *= parts.back().order();
        if (order > 4096) throw GroupError("direct product too large for a dense table");
      }
      out = parts.front();
      for (std::size_t i = 1; i < parts.size(); ++i) out = direct_product(out, parts[i]);
      break;
    }
  }
  out.set_label(print_group_spec(g));
  return out;
}

}  // namespace anyon
