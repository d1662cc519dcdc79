#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "qfactor/errors.hpp"
#include "qfactor/hardware.hpp"
#include "qfactor/objective.hpp"
#include "qfactor/quadratize.hpp"
#include "qfactor/solve.hpp"
#include "testutil.hpp"

using namespace qfactor;
using qtest::Rng;

namespace {

Qubo factoring_qubo(const ProblemSpec& spec) {
  MultilinearPoly obj = build_objective(spec);
  return quadratize(obj, PenaltyWeight{safe_penalty_bound(obj)});
}

}  // namespace

TEST_CASE("hardware model validation and config round trip") {
  HardwareModel hw;
  CHECK(hw.coeff_range == 1.0);
  CHECK(hw.precision_bits == 5);
  CHECK(hw.chain_length == 1);
  CHECK_NOTHROW(hw.validate());

  HardwareModel bad = hw;
  bad.precision_bits = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.precision_bits = 61;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = hw;
  bad.coeff_range = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = hw;
  bad.chain_length = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = hw;
  bad.noise_sigma = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = hw;
  bad.param_chain = -5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  HardwareModel custom{2.5, 8, 0.01, 3, 450, 99};
  CHECK(HardwareModel::from_config(ConfigMap::parse(custom.to_config())) == custom);
}

TEST_CASE("quantizer rounds to the grid, half away from zero") {
  // precision 5, range 1.0: step = 1/16.
  CHECK(quantize_coefficient(0.3, 1.0, 5) == doctest::Approx(0.3125).epsilon(1e-15));
  CHECK(quantize_coefficient(-0.3, 1.0, 5) == doctest::Approx(-0.3125).epsilon(1e-15));
  CHECK(quantize_coefficient(0.09375, 1.0, 5) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(quantize_coefficient(-0.09375, 1.0, 5) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(quantize_coefficient(0.02, 1.0, 5) == 0.0);
  CHECK(quantize_coefficient(1.0, 1.0, 5) == 1.0);
  CHECK(quantize_coefficient(-1.0, 1.0, 5) == -1.0);

  Rng rng(8080);
  for (int iter = 0; iter < 200; ++iter) {
    double v = (rng.real01() - 0.5) * 4.0;
    int bits = static_cast<int>(rng.range(1, 20));
    double range = 0.5 + rng.real01() * 2.0;
    double once = quantize_coefficient(v, range, bits);
    CHECK(quantize_coefficient(once, range, bits) == once);
    double step = range / std::ldexp(1.0, bits - 1);
    CHECK(std::abs(once - v) <= step / 2 + 1e-12);
  }
}

TEST_CASE("dynamic range") {
  Qubo q;
  q.linear[VarId::x(1)] = 4;
  q.linear[VarId::y(1)] = -8;
  DynamicRange r = dynamic_range(q);
  CHECK(r.max_abs == 8);
  CHECK(r.min_abs_nonzero == 4);
  CHECK(r.ratio == doctest::Approx(2.0));

  Qubo with_offset;
  with_offset.offset = 1000;
  with_offset.linear[VarId::x(1)] = 2;
  DynamicRange r2 = dynamic_range(with_offset);
  CHECK(r2.max_abs == 2);
  CHECK(r2.min_abs_nonzero == 2);

  Qubo empty;
  empty.offset = 7;
  CHECK_THROWS_AS(dynamic_range(empty), std::invalid_argument);
}

TEST_CASE("scaling pins the largest coefficient to the range boundary") {
  Qubo q = factoring_qubo(ProblemSpec{15, 4, 4, ObjectiveVariant::EQ2});
  DynamicRange r = dynamic_range(q);
  MultilinearPoly obj = build_objective(ProblemSpec{15, 4, 4, ObjectiveVariant::EQ2});
  CHECK(r.max_abs == Coeff(3) * safe_penalty_bound(obj));
  CHECK(safe_penalty_bound(obj) == 42837241);
  CHECK(r.min_abs_nonzero == 96);

  HardwareModel hw;
  hw.precision_bits = 60;
  DegradedQubo d = degrade(q, hw, 0);
  CHECK(d.scale_factor == doctest::Approx(1.0 / to_double(r.max_abs)).epsilon(1e-15));
  CHECK(compute_scale_factor(q, hw) == d.scale_factor);

  double max_seen = 0.0;
  for (double c : d.linear) max_seen = std::max(max_seen, std::abs(c));
  for (const auto& [pr, c] : d.quadratic) max_seen = std::max(max_seen, std::abs(c));
  CHECK(max_seen == hw.coeff_range);
}

TEST_CASE("near-identity degradation preserves energies and minimizers") {
  ProblemSpec spec{15, 2, 2, ObjectiveVariant::EQ2};
  Qubo q = factoring_qubo(spec);
  HardwareModel hw;
  hw.precision_bits = 60;
  DegradedQubo d = degrade(q, hw, 0);

  std::vector<VarId> vars = q.variables();
  REQUIRE(vars == d.logical_vars);
  const int n = static_cast<int>(vars.size());
  REQUIRE(n <= 12);

  double best_deg = 0.0;
  Coeff best_exact;
  bool first = true;
  std::vector<double> deg_energies(1u << n);
  std::vector<Coeff> exact_energies(1u << n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::uint8_t> state(n);
    Assignment a;
    for (int i = 0; i < n; ++i) {
      state[i] = (mask >> i) & 1u;
      a[vars[i]] = state[i];
    }
    Coeff e = qubo_energy(q, a);
    double de = d.energy(state);
    exact_energies[mask] = e;
    deg_energies[mask] = de;
    CHECK(std::abs(de - d.scale_factor * to_double(e - q.offset)) < 1e-12);
    if (first || e < best_exact) best_exact = e;
    if (first || de < best_deg) best_deg = de;
    first = false;
  }

  // Tied minimizers must survive degradation; the scaled unit gap dwarfs both
  // quantization error and floating-point accumulation at 60 bits.
  std::set<std::uint32_t> argmin_exact, argmin_deg;
  const double eps = 0.25 * d.scale_factor;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (exact_energies[mask] == best_exact) argmin_exact.insert(mask);
    if (deg_energies[mask] <= best_deg + eps) argmin_deg.insert(mask);
  }
  CHECK(argmin_exact == argmin_deg);
}

TEST_CASE("chain expansion: shares, couplings, and unanimous energies") {
  Qubo q;
  q.linear[VarId::x(1)] = 7;
  q.quadratic[{VarId::x(1), VarId::y(1)}] = 5;
  q.offset = 3;

  HardwareModel hw;
  hw.precision_bits = 60;
  hw.chain_length = 3;
  hw.param_chain = 10;
  DegradedQubo d = degrade(q, hw, 0);

  REQUIRE(d.num_physical() == 6);
  REQUIRE(d.logical_vars == std::vector<VarId>{VarId::x(1), VarId::y(1)});
  CHECK(d.chain_for(VarId::x(1)) == std::vector<int>{0, 1, 2});
  CHECK(d.chain_for(VarId::y(1)) == std::vector<int>{3, 4, 5});
  CHECK_THROWS_AS(d.chain_for(VarId::x(2)), MissingVariable);

  // Pre-scaling image: linear 7 splits as 3+2+2; each bond (u, v) carries
  // quadratic -2*pc with +pc on both endpoints; the logical coupling sits on
  // first members. Largest magnitude is the middle x member, 2 + 2*pc = 22.
  const double s = d.scale_factor;
  CHECK(s == doctest::Approx(1.0 / 22.0).epsilon(1e-14));
  CHECK(d.linear[0] == doctest::Approx(13.0 * s).epsilon(1e-12));
  CHECK(d.linear[1] == 1.0);
  CHECK(d.linear[2] == doctest::Approx(12.0 * s).epsilon(1e-12));
  CHECK(d.linear[3] == doctest::Approx(10.0 * s).epsilon(1e-12));
  CHECK(d.linear[4] == doctest::Approx(20.0 * s).epsilon(1e-12));
  CHECK(d.linear[5] == doctest::Approx(10.0 * s).epsilon(1e-12));
  CHECK(d.quadratic.at({0, 3}) == doctest::Approx(5.0 * s).epsilon(1e-12));
  for (auto key : {std::pair<int, int>{0, 1}, {1, 2}, {3, 4}, {4, 5}}) {
    CHECK(d.quadratic.at(key) == doctest::Approx(-20.0 * s).epsilon(1e-12));
  }

  // On unanimous chains the agreement penalty contributes exactly zero, so
  // the physical energy is the scaled logical energy for every assignment.
  for (int bx = 0; bx <= 1; ++bx) {
    for (int by = 0; by <= 1; ++by) {
      std::vector<std::uint8_t> state = {static_cast<std::uint8_t>(bx), static_cast<std::uint8_t>(bx),
                                         static_cast<std::uint8_t>(bx), static_cast<std::uint8_t>(by),
                                         static_cast<std::uint8_t>(by), static_cast<std::uint8_t>(by)};
      Coeff logical = q.energy(Assignment{{VarId::x(1), bx}, {VarId::y(1), by}});
      CHECK(std::abs(d.energy(state) - s * to_double(logical - q.offset)) < 1e-12);
    }
  }

  // A disagreeing bond costs pc beyond the member's own linear share: the
  // first member alone trips one bond (3 + pc = 13), the middle member trips
  // both of its bonds (2 + 2*pc = 22).
  CHECK(d.energy({1, 0, 0, 0, 0, 0}) == doctest::Approx(13.0 * s).epsilon(1e-10));
  CHECK(d.energy({0, 1, 0, 0, 0, 0}) == doctest::Approx(22.0 * s).epsilon(1e-10));
  CHECK(d.energy({0, 0, 0, 0, 0, 0}) == 0.0);
}

TEST_CASE("chain decode: majority, ties, break accounting") {
  Qubo q;
  q.linear[VarId::x(1)] = 1;
  q.linear[VarId::y(1)] = 1;
  HardwareModel hw;
  hw.chain_length = 3;
  hw.param_chain = 1;
  DegradedQubo d = degrade(q, hw, 0);

  ChainDecode all_one = decode_chains(d, {1, 1, 1, 0, 0, 0});
  CHECK(all_one.logical == Assignment{{VarId::x(1), 1}, {VarId::y(1), 0}});
  CHECK(all_one.intact);
  CHECK(all_one.break_count == 0);
  CHECK(all_one.broken.empty());

  ChainDecode split = decode_chains(d, {1, 0, 1, 0, 1, 0});
  CHECK(split.logical == Assignment{{VarId::x(1), 1}, {VarId::y(1), 0}});
  CHECK(!split.intact);
  CHECK(split.break_count == 2);
  CHECK(split.broken == std::vector<VarId>{VarId::x(1), VarId::y(1)});

  CHECK_THROWS_AS(decode_chains(d, {1, 0, 1}), MissingVariable);

  HardwareModel two = hw;
  two.chain_length = 2;
  DegradedQubo d2 = degrade(q, two, 0);
  ChainDecode tie = decode_chains(d2, {1, 0, 0, 0});
  CHECK(tie.logical.at(VarId::x(1)) == 1);  // ties resolve up
  CHECK(tie.break_count == 1);

  HardwareModel flat = hw;
  flat.chain_length = 1;
  ChainDecode identity = decode_chains(degrade(q, flat, 0), {1, 0});
  CHECK(identity.intact);
  CHECK(identity.logical == Assignment{{VarId::x(1), 1}, {VarId::y(1), 0}});
}

TEST_CASE("noise is seeded, deterministic, and grid-respecting") {
  Qubo q = factoring_qubo(ProblemSpec{15, 2, 2, ObjectiveVariant::EQ2});
  HardwareModel hw;
  hw.noise_sigma = 0.02;
  hw.precision_bits = 8;

  CHECK(degrade(q, hw, 1234) == degrade(q, hw, 1234));
  CHECK(degrade(q, hw, 1234) != degrade(q, hw, 1235));

  HardwareModel quiet = hw;
  quiet.noise_sigma = 0.0;
  CHECK(degrade(q, quiet, 1) == degrade(q, quiet, 2));

  // Coefficients that quantize to zero stay exactly zero under noise.
  Qubo skewed;
  skewed.linear[VarId::x(1)] = 1;
  skewed.linear[VarId::y(1)] = 1000000;
  HardwareModel coarse;
  coarse.precision_bits = 5;
  coarse.noise_sigma = 0.05;
  DegradedQubo d = degrade(skewed, coarse, 77);
  CHECK(d.linear[d.chain_for(VarId::x(1))[0]] == 0.0);
  CHECK(d.linear[d.chain_for(VarId::y(1))[0]] != 0.0);
  CHECK(d.linear[d.chain_for(VarId::y(1))[0]] != 1.0);
}

TEST_CASE("coarse precision annihilates the small coefficients wholesale") {
  Qubo q = factoring_qubo(ProblemSpec{899, 4, 4, ObjectiveVariant::EQ2});
  DynamicRange r = dynamic_range(q);
  CHECK(r.min_abs_nonzero == 96);
  CHECK(r.ratio >= 1e9);

  HardwareModel hw;  // defaults: range 1.0, 5 bits, no chains
  DegradedQubo d = degrade(q, hw, 0);

  // At 5 bits the grid step is max/16, so anything clearly below max/32 sits
  // inside half a step and must vanish; anything clearly above survives.
  // Coefficients within rounding distance of the boundary are skipped.
  const double max_abs = to_double(r.max_abs);
  int vanished = 0, survived = 0;
  auto classify = [&](const Coeff& c, double got) {
    const double ac = to_double(abs_coeff(c));
    if (32.0 * ac < max_abs * (1.0 - 1e-9)) {
      CHECK(got == 0.0);
      ++vanished;
    } else if (32.0 * ac > max_abs * (1.0 + 1e-9)) {
      CHECK(got != 0.0);
      ++survived;
    }
  };
  auto degraded_value = [&](VarId a, VarId b) {
    int i = d.chain_for(a)[0];
    int j = d.chain_for(b)[0];
    auto it = d.quadratic.find({std::min(i, j), std::max(i, j)});
    return it == d.quadratic.end() ? 0.0 : it->second;
  };
  for (const auto& [v, c] : q.linear) classify(c, d.linear[d.chain_for(v)[0]]);
  for (const auto& [pr, c] : q.quadratic) classify(c, degraded_value(pr.first, pr.second));
  CHECK(vanished > 50);
  CHECK(survived > 10);
}

TEST_CASE("uncoupled chains break under noise") {
  // The linear weight is too small to survive quantization, so the second
  // and third chain members end up as free spins.
  Qubo q;
  q.linear[VarId::x(1)] = 1;
  q.linear[VarId::y(1)] = 1;
  q.quadratic[{VarId::x(1), VarId::y(1)}] = 1000;
  ProblemSpec spec{15, 1, 1, ObjectiveVariant::EQ2};
  HardwareModel hw;
  hw.precision_bits = 8;
  hw.noise_sigma = 0.05;
  hw.chain_length = 3;
  hw.param_chain = 0;
  DegradedQubo d = degrade(q, hw, 11);

  for (const auto& [pr, c] : d.quadratic) {
    const auto& xc = d.chain_for(VarId::x(1));
    const auto& yc = d.chain_for(VarId::y(1));
    bool same_chain =
        (pr.first >= xc.front() && pr.second <= xc.back()) ||
        (pr.first >= yc.front() && pr.second <= yc.back());
    // param_chain = 0 leaves no intra-chain coupling to create.
    CHECK(!same_chain);
  }

  AnnealSchedule sched;
  sched.seed = 7;
  SolveResult<double> r = solve_sa(d, spec, sched, 50);
  int total_breaks = 0;
  for (const auto& s : r.samples) total_breaks += s.break_count;
  CHECK(total_breaks > 0);
}
