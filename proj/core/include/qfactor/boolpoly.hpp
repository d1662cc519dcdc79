#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qfactor/coeff.hpp"

namespace qfactor {

// Variables come in three families: bits of the first factor ("x"), bits of
// the second factor ("y"), and ancillas introduced by quadratization ("a").
// x/y indices are 1-based because bit i carries weight 2^i in the odd-number
// encoding; ancilla indices are 0-based and dense.
enum class VarKind : std::uint8_t { XBit = 0, YBit = 1, Ancilla = 2 };

struct VarId {
  VarKind kind = VarKind::XBit;
  int index = 0;

  friend auto operator<=>(const VarId&, const VarId&) = default;

  static VarId x(int i) { return VarId{VarKind::XBit, i}; }
  static VarId y(int i) { return VarId{VarKind::YBit, i}; }
  static VarId ancilla(int i) { return VarId{VarKind::Ancilla, i}; }

  // "x3", "y1", "a0"
  std::string name() const;
  static VarId parse(std::string_view text);  // throws ParseError
};

// Boolean point: every mapped value must be 0 or 1.
using Assignment = std::map<VarId, int>;

// A product of distinct variables. Over Boolean values v^2 = v, so repeated
// variables collapse on construction and products are set unions. The empty
// monomial is the constant 1.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<VarId> vars);

  static Monomial product(const Monomial& a, const Monomial& b);

  int degree() const { return static_cast<int>(vars_.size()); }
  bool is_constant() const { return vars_.empty(); }
  const std::vector<VarId>& vars() const { return vars_; }

  bool contains(VarId v) const;
  bool contains_pair(VarId a, VarId b) const;

  // Removes the pair {a, b} and inserts z instead; both must be present.
  Monomial with_pair_replaced(VarId a, VarId b, VarId z) const;

  // Graded lexicographic: lower degree first, then lexicographic on the
  // sorted variable lists. Gives every polynomial one canonical term order.
  friend bool operator<(const Monomial& lhs, const Monomial& rhs);
  friend bool operator==(const Monomial& lhs, const Monomial& rhs) = default;

 private:
  std::vector<VarId> vars_;  // sorted, unique
};

// Multilinear polynomial with exact integer coefficients, stored sparsely as
// monomial -> coefficient. Zero coefficients are never kept, so structural
// equality is semantic equality. Values are immutable once built; all
// arithmetic returns fresh polynomials.
class MultilinearPoly {
 public:
  using TermMap = std::map<Monomial, Coeff>;

  MultilinearPoly() = default;  // the zero polynomial

  static MultilinearPoly constant(const Coeff& c);
  static MultilinearPoly variable(VarId v);
  static MultilinearPoly from_terms(TermMap terms);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  int degree() const;  // 0 for constants and for the zero polynomial

  // Coefficient of a monomial, 0 if the term is absent.
  Coeff coefficient(const Monomial& m) const;

  // Every variable occurring in some term.
  std::set<VarId> variables() const;

  // Evaluate at a 0/1 point. The assignment must cover every variable of
  // the polynomial (MissingVariable otherwise), and values must be 0 or 1.
  Coeff eval(const Assignment& assignment) const;

  // Divides every coefficient by `divisor`, which must divide each of them
  // exactly; throws DivisibilityViolation naming the first offender.
  MultilinearPoly divided_exact(const Coeff& divisor) const;

  // One term per line, graded lexicographic order:
  //   <coefficient> <var> <var> ...
  // A constant term is a bare coefficient line; the zero polynomial is the
  // empty string. parse_text accepts blank lines and '#' comments and
  // canonicalizes (merges duplicate monomials, drops zeros).
  std::string to_text() const;
  static MultilinearPoly parse_text(std::string_view text);

  friend MultilinearPoly operator+(const MultilinearPoly& a, const MultilinearPoly& b);
  friend MultilinearPoly operator-(const MultilinearPoly& a, const MultilinearPoly& b);
  friend MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b);
  friend MultilinearPoly operator*(const Coeff& c, const MultilinearPoly& p);
  MultilinearPoly operator-() const;

  friend bool operator==(const MultilinearPoly& a, const MultilinearPoly& b) = default;

 private:
  void add_term(const Monomial& m, const Coeff& c);

  TermMap terms_;
};

}  // namespace qfactor
