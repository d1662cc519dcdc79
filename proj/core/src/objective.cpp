#include "qfactor/objective.hpp"

#include <stdexcept>

#include "qfactor/errors.hpp"

namespace qfactor {

std::string variant_to_string(ObjectiveVariant v) {
  switch (v) {
    case ObjectiveVariant::EQ1: return "EQ1";
    case ObjectiveVariant::EQ2: return "EQ2";
    case ObjectiveVariant::SimplifiedNoN2: return "SIMPLIFIED_NO_N2";
    case ObjectiveVariant::SimplifiedPlain: return "SIMPLIFIED_PLAIN";
  }
  throw std::logic_error("variant_to_string: bad enum value");
}

ObjectiveVariant variant_from_string(std::string_view s) {
  if (s == "EQ1") return ObjectiveVariant::EQ1;
  if (s == "EQ2") return ObjectiveVariant::EQ2;
  if (s == "SIMPLIFIED_NO_N2") return ObjectiveVariant::SimplifiedNoN2;
  if (s == "SIMPLIFIED_PLAIN") return ObjectiveVariant::SimplifiedPlain;
  throw ConfigError("unknown objective variant '" + std::string(s) + "'");
}

void OddEncoding::validate() const {
  if (role != VarKind::XBit && role != VarKind::YBit) {
    throw std::invalid_argument("OddEncoding: role must be an encoding bit family");
  }
  if (num_bits < 1 || num_bits > 30) {
    throw std::invalid_argument("OddEncoding: num_bits must be in [1, 30]");
  }
}

MultilinearPoly OddEncoding::to_poly() const {
  validate();
  MultilinearPoly p = MultilinearPoly::constant(1);
  for (int i = 1; i <= num_bits; ++i) {
    p = p + Coeff(1LL << i) * MultilinearPoly::variable(VarId{role, i});
  }
  return p;
}

long long OddEncoding::max_value() const { return (1LL << (num_bits + 1)) - 1; }

long long OddEncoding::decode(const Assignment& assignment) const {
  validate();
  long long value = 1;
  for (int i = 1; i <= num_bits; ++i) {
    auto it = assignment.find(VarId{role, i});
    if (it == assignment.end()) {
      throw MissingVariable("decode: assignment missing bit " + VarId{role, i}.name());
    }
    if (it->second != 0 && it->second != 1) {
      throw std::invalid_argument("decode: bit values must be 0 or 1");
    }
    if (it->second) value += 1LL << i;
  }
  return value;
}

long long OddEncoding::decode_lenient(const Assignment& assignment) const {
  validate();
  long long value = 1;
  for (int i = 1; i <= num_bits; ++i) {
    auto it = assignment.find(VarId{role, i});
    if (it != assignment.end() && it->second != 0) value += 1LL << i;
  }
  return value;
}

Assignment OddEncoding::encode(long long value) const {
  validate();
  if (value < 1 || value > max_value() || value % 2 == 0) {
    throw std::invalid_argument("encode: value " + std::to_string(value) +
                                " is not an odd integer in [1, " +
                                std::to_string(max_value()) + "]");
  }
  Assignment out;
  long long rest = (value - 1) >> 1;
  for (int i = 1; i <= num_bits; ++i) {
    out[VarId{role, i}] = static_cast<int>(rest & 1);
    rest >>= 1;
  }
  return out;
}

void ProblemSpec::validate() const {
  if (n < 3 || n % 2 == 0) {
    throw std::invalid_argument("ProblemSpec: n must be an odd integer >= 3");
  }
  x_encoding().validate();
  y_encoding().validate();
}

ProblemSpec ProblemSpec::preset_3x4(long long n, ObjectiveVariant variant) {
  return ProblemSpec{n, 3, 4, variant};
}

std::string ProblemSpec::to_config() const {
  ConfigMap cfg;
  cfg.add_int64("n", n);
  cfg.add_int64("x_bits", x_bits);
  cfg.add_int64("y_bits", y_bits);
  cfg.add("variant", variant_to_string(variant));
  return cfg.serialize();
}

ProblemSpec ProblemSpec::from_config(const ConfigMap& cfg) {
  ProblemSpec spec;
  spec.n = cfg.get_int64("n", spec.n);
  spec.x_bits = cfg.get_int("x_bits", spec.x_bits);
  spec.y_bits = cfg.get_int("y_bits", spec.y_bits);
  if (auto v = cfg.get("variant")) spec.variant = variant_from_string(*v);
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

namespace {

MultilinearPoly square(const MultilinearPoly& p) { return p * p; }

// Shared pieces: u = encoded x, w = encoded y, r = N - u*w, tie = u*(u - w)^2.
struct Pieces {
  MultilinearPoly residual_sq;  // (N - x y)^2
  MultilinearPoly tie;          // x (x - y)^2
};

Pieces build_pieces(const ProblemSpec& spec) {
  const MultilinearPoly u = spec.x_encoding().to_poly();
  const MultilinearPoly w = spec.y_encoding().to_poly();
  const MultilinearPoly r = MultilinearPoly::constant(spec.n) - u * w;
  return Pieces{square(r), u * square(u - w)};
}

}  // namespace

MultilinearPoly build_eq2_predivision(const ProblemSpec& spec) {
  spec.validate();
  const Pieces pieces = build_pieces(spec);
  const Coeff n2 = Coeff(spec.n) * spec.n;
  const Coeff n3 = n2 * spec.n;
  const Coeff n4 = n3 * spec.n;
  const Coeff shift = Coeff(2) * n3 - n2 - n4;
  return n2 * pieces.residual_sq + MultilinearPoly::constant(shift) + pieces.tie;
}

MultilinearPoly build_objective(const ProblemSpec& spec) {
  spec.validate();
  switch (spec.variant) {
    case ObjectiveVariant::EQ1: {
      const Pieces pieces = build_pieces(spec);
      const Coeff n2 = Coeff(spec.n) * spec.n;
      return n2 * pieces.residual_sq + pieces.tie;
    }
    case ObjectiveVariant::EQ2:
      return build_eq2_predivision(spec).divided_exact(4);
    case ObjectiveVariant::SimplifiedNoN2: {
      const Pieces pieces = build_pieces(spec);
      const Coeff shift = Coeff(spec.n - 1) * (spec.n - 1);
      return pieces.residual_sq - MultilinearPoly::constant(shift) + pieces.tie;
    }
    case ObjectiveVariant::SimplifiedPlain:
      return build_pieces(spec).residual_sq;
  }
  throw std::logic_error("build_objective: bad enum value");
}

std::pair<long long, long long> decode_xy(const ProblemSpec& spec, const Assignment& assignment) {
  return {spec.x_encoding().decode(assignment), spec.y_encoding().decode(assignment)};
}

Table1Row table1_decomposition(long long n, long long x, long long y) {
  const Coeff cn(n), cx(x), cy(y);
  const Coeff n2 = cn * cn;
  const Coeff residual = cn - cx * cy;
  Table1Row row;
  row.term_a = n2 * residual * residual;
  row.term_b = Coeff(2) * n2 * cn - n2 - n2 * n2;
  row.term_c = cx * (cx - cy) * (cx - cy);
  row.sum4 = row.term_a + row.term_b + row.term_c;
  row.integral = (row.sum4 % 4 == 0);
  if (row.integral) row.quarter = row.sum4 / 4;
  return row;
}

}  // namespace qfactor
