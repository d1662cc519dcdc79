#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "qfactor/boolpoly.hpp"
#include "qfactor/coeff.hpp"
#include "qfactor/config.hpp"

namespace qfactor {

// The four factoring objectives over odd x and y. All share the product
// residual (N - x*y)^2 and the tie-breaker x*(x - y)^2 that orders the two
// factors; they differ in scaling and constant shifts.
//
//   EQ1              = N^2 (N - x y)^2 + x (x - y)^2
//   EQ2              = [ N^2 (N - x y)^2 - N^2 + 2 N^3 - N^4 + x (x - y)^2 ] / 4
//   SIMPLIFIED_NO_N2 = (N - x y)^2 - (N - 1)^2 + x (x - y)^2
//   SIMPLIFIED_PLAIN = (N - x y)^2
//
// EQ2's division by 4 is exact on the encoded domain; build_objective throws
// DivisibilityViolation if it ever is not.
enum class ObjectiveVariant { EQ1, EQ2, SimplifiedNoN2, SimplifiedPlain };

std::string variant_to_string(ObjectiveVariant v);
ObjectiveVariant variant_from_string(std::string_view s);  // throws ConfigError

// Odd-integer binary encoding: value = 1 + sum_{i=1..num_bits} 2^i b_i, so
// the represented range is the odd numbers in [1, 2^(num_bits+1) - 1].
struct OddEncoding {
  VarKind role = VarKind::XBit;  // XBit or YBit
  int num_bits = 4;

  void validate() const;

  MultilinearPoly to_poly() const;
  long long max_value() const;

  // Strict decode: every bit variable must be present (MissingVariable).
  long long decode(const Assignment& assignment) const;
  // Lenient decode used on solver samples: absent bits read as 0.
  long long decode_lenient(const Assignment& assignment) const;

  // Bits of an odd value in range; throws std::invalid_argument otherwise.
  Assignment encode(long long value) const;
};

struct ProblemSpec {
  long long n = 15;
  int x_bits = 4;
  int y_bits = 4;
  ObjectiveVariant variant = ObjectiveVariant::EQ2;

  void validate() const;  // n odd and >= 3, bit widths >= 1

  OddEncoding x_encoding() const { return OddEncoding{VarKind::XBit, x_bits}; }
  OddEncoding y_encoding() const { return OddEncoding{VarKind::YBit, y_bits}; }

  // The reduced-width configuration: 3 x-bits, 4 y-bits.
  static ProblemSpec preset_3x4(long long n, ObjectiveVariant variant = ObjectiveVariant::EQ2);

  std::string to_config() const;
  static ProblemSpec from_config(const ConfigMap& cfg);  // throws ConfigError

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

// Expands the chosen objective into a multilinear polynomial over the
// encoding bits. Degree is at most 4 regardless of bit widths.
MultilinearPoly build_objective(const ProblemSpec& spec);

// EQ2's numerator before the division by 4; exposed so the divisibility
// property can be checked against the as-built polynomial.
MultilinearPoly build_eq2_predivision(const ProblemSpec& spec);

// Reads (x, y) off an assignment. Requires every encoding bit to be present;
// ancillas and anything else in the assignment are ignored.
std::pair<long long, long long> decode_xy(const ProblemSpec& spec, const Assignment& assignment);

// Exact decomposition of 4 * EQ2 evaluated at integers (x, y):
//   term_a = N^2 (N - x y)^2
//   term_b = -N^2 + 2 N^3 - N^4
//   term_c = x (x - y)^2
// sum4 = term_a + term_b + term_c; when sum4 is a multiple of 4 the quarter
// value is reported, otherwise `integral` is false and `quarter` is unset.
struct Table1Row {
  Coeff term_a{0};
  Coeff term_b{0};
  Coeff term_c{0};
  Coeff sum4{0};
  bool integral = false;
  Coeff quarter{0};
};

Table1Row table1_decomposition(long long n, long long x, long long y);

}  // namespace qfactor
