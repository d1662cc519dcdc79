#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qfactor/boolpoly.hpp"
#include "qfactor/coeff.hpp"

namespace qfactor {

// Record of one ancilla substitution: `ancilla` stands for the product
// `first * second` wherever the pair was eliminated.
struct AncillaDef {
  VarId ancilla;
  VarId first;
  VarId second;

  friend bool operator==(const AncillaDef&, const AncillaDef&) = default;
};

// Quadratic pseudo-Boolean objective. Quadratic keys are normalized with
// key.first < key.second, and no stored coefficient is zero.
struct Qubo {
  std::map<VarId, Coeff> linear;
  std::map<std::pair<VarId, VarId>, Coeff> quadratic;
  Coeff offset{0};
  std::vector<AncillaDef> ancilla_defs;  // in creation order

  std::vector<VarId> variables() const;  // sorted union of linear + quadratic

  // Energy at a 0/1 point covering every variable (MissingVariable
  // otherwise). Offset included.
  Coeff energy(const Assignment& assignment) const;

  // Text form, one entry per line in deterministic order:
  //   c <offset>
  //   <var> <coeff>
  //   <var> <var> <coeff>
  // Ancilla definitions are bookkeeping and are not serialized.
  std::string to_text() const;
  static Qubo parse_text(std::string_view text);  // throws ParseError

  friend bool operator==(const Qubo&, const Qubo&) = default;
};

// Penalty weight for product-substitution constraints; must be >= 1.
struct PenaltyWeight {
  Coeff s{1};
  void validate() const;
};

// A weight that guarantees penalty violations always cost more than any
// possible gain from the eliminated terms: 1 + sum of |coefficient| over all
// monomials of degree >= 3.
Coeff safe_penalty_bound(const MultilinearPoly& p);

// Reduces an arbitrary multilinear polynomial to a Qubo by repeatedly
// substituting an ancilla z for a variable pair (a, b) and adding the
// penalty s * (3 z + a b - 2 z a - 2 z b), which is 0 exactly when z = a b.
//
// Pair selection is greedy: among pairs occurring in monomials of degree
// >= 3, the pair contained in the most degree-3 monomials wins, ties broken
// by lowest pair in variable order. Rewarding immediate degree-3
// eliminations keeps the ancilla count low on the objectives this library
// builds; the 4-bit by 4-bit instances reduce with exactly 12 ancillas.
//
// Penalty terms merge into the working polynomial; when s >= the safe bound
// every minimizer of the result has each z equal to its defining product,
// and restricted minima agree with the original polynomial.
Qubo quadratize(const MultilinearPoly& p, const PenaltyWeight& penalty);

Coeff qubo_energy(const Qubo& q, const Assignment& assignment);

}  // namespace qfactor
