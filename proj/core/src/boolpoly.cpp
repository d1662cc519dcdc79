#include "qfactor/boolpoly.hpp"

#include <algorithm>
#include <sstream>

#include "qfactor/errors.hpp"

namespace qfactor {

std::string VarId::name() const {
  char prefix = '?';
  switch (kind) {
    case VarKind::XBit: prefix = 'x'; break;
    case VarKind::YBit: prefix = 'y'; break;
    case VarKind::Ancilla: prefix = 'a'; break;
  }
  return prefix + std::to_string(index);
}

VarId VarId::parse(std::string_view text) {
  if (text.size() < 2) throw ParseError("bad variable name: '" + std::string(text) + "'");
  VarKind kind;
  switch (text[0]) {
    case 'x': kind = VarKind::XBit; break;
    case 'y': kind = VarKind::YBit; break;
    case 'a': kind = VarKind::Ancilla; break;
    default: throw ParseError("bad variable name: '" + std::string(text) + "'");
  }
  int index = 0;
  for (std::size_t i = 1; i < text.size(); ++i) {
    char ch = text[i];
    if (ch < '0' || ch > '9') {
      throw ParseError("bad variable name: '" + std::string(text) + "'");
    }
    if (index > 100000000) throw ParseError("variable index too large: '" + std::string(text) + "'");
    index = index * 10 + (ch - '0');
  }
  return VarId{kind, index};
}

Monomial::Monomial(std::vector<VarId> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
}

Monomial Monomial::product(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.vars_.reserve(a.vars_.size() + b.vars_.size());
  std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                 std::back_inserter(out.vars_));
  return out;
}

bool Monomial::contains(VarId v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

bool Monomial::contains_pair(VarId a, VarId b) const { return contains(a) && contains(b); }

Monomial Monomial::with_pair_replaced(VarId a, VarId b, VarId z) const {
  std::vector<VarId> out;
  out.reserve(vars_.size() - 1);
  for (VarId v : vars_) {
    if (v != a && v != b) out.push_back(v);
  }
  out.push_back(z);
  return Monomial(std::move(out));
}

bool operator<(const Monomial& lhs, const Monomial& rhs) {
  if (lhs.vars_.size() != rhs.vars_.size()) return lhs.vars_.size() < rhs.vars_.size();
  return lhs.vars_ < rhs.vars_;
}

MultilinearPoly MultilinearPoly::constant(const Coeff& c) {
  MultilinearPoly p;
  p.add_term(Monomial{}, c);
  return p;
}

MultilinearPoly MultilinearPoly::variable(VarId v) {
  MultilinearPoly p;
  p.add_term(Monomial({v}), 1);
  return p;
}

MultilinearPoly MultilinearPoly::from_terms(TermMap terms) {
  MultilinearPoly p;
  for (auto& [m, c] : terms) p.add_term(m, c);
  return p;
}

int MultilinearPoly::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

Coeff MultilinearPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Coeff(0) : it->second;
}

std::set<VarId> MultilinearPoly::variables() const {
  std::set<VarId> vars;
  for (const auto& [m, c] : terms_) vars.insert(m.vars().begin(), m.vars().end());
  return vars;
}

Coeff MultilinearPoly::eval(const Assignment& assignment) const {
  // Validate coverage up front so a term short-circuited by a 0 bit cannot
  // mask a hole in the assignment.
  for (VarId v : variables()) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      throw MissingVariable("eval: assignment missing variable " + v.name());
    }
    if (it->second != 0 && it->second != 1) {
      throw std::invalid_argument("eval: value of " + v.name() + " must be 0 or 1");
    }
  }
  Coeff total = 0;
  for (const auto& [m, c] : terms_) {
    bool active = true;
    for (VarId v : m.vars()) {
      if (assignment.find(v)->second == 0) {
        active = false;
        break;
      }
    }
    if (active) total += c;
  }
  return total;
}

MultilinearPoly MultilinearPoly::divided_exact(const Coeff& divisor) const {
  if (divisor == 0) throw std::invalid_argument("divided_exact: divisor is zero");
  MultilinearPoly out;
  for (const auto& [m, c] : terms_) {
    if (c % divisor != 0) {
      std::string where = m.is_constant() ? std::string("constant term") : "term";
      if (!m.is_constant()) {
        for (VarId v : m.vars()) where += " " + v.name();
      }
      throw DivisibilityViolation("divided_exact: coefficient " + coeff_to_string(c) + " of " +
                                  where + " is not divisible by " + coeff_to_string(divisor));
    }
    out.add_term(m, c / divisor);
  }
  return out;
}

std::string MultilinearPoly::to_text() const {
  std::string out;
  for (const auto& [m, c] : terms_) {
    out += coeff_to_string(c);
    for (VarId v : m.vars()) {
      out += ' ';
      out += v.name();
    }
    out += '\n';
  }
  return out;
}

MultilinearPoly MultilinearPoly::parse_text(std::string_view text) {
  MultilinearPoly p;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;  // blank or comment-only line
    Coeff c;
    try {
      c = coeff_from_string(first);
    } catch (const ParseError&) {
      throw ParseError("polynomial line " + std::to_string(line_no) +
                       ": expected coefficient, got '" + first + "'");
    }
    std::vector<VarId> vars;
    std::string tok;
    while (tokens >> tok) vars.push_back(VarId::parse(tok));
    p.add_term(Monomial(std::move(vars)), c);
  }
  return p;
}

void MultilinearPoly::add_term(const Monomial& m, const Coeff& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultilinearPoly operator+(const MultilinearPoly& a, const MultilinearPoly& b) {
  MultilinearPoly out = a;
  for (const auto& [m, c] : b.terms_) out.add_term(m, c);
  return out;
}

MultilinearPoly operator-(const MultilinearPoly& a, const MultilinearPoly& b) {
  MultilinearPoly out = a;
  for (const auto& [m, c] : b.terms_) out.add_term(m, Coeff(-c));
  return out;
}

MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b) {
  MultilinearPoly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      out.add_term(Monomial::product(ma, mb), Coeff(ca * cb));
    }
  }
  return out;
}

MultilinearPoly operator*(const Coeff& c, const MultilinearPoly& p) {
  MultilinearPoly out;
  for (const auto& [m, pc] : p.terms_) out.add_term(m, Coeff(c * pc));
  return out;
}

MultilinearPoly MultilinearPoly::operator-() const { return Coeff(-1) * *this; }

}  // namespace qfactor
