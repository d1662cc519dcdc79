#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qfactor/config.hpp"
#include "qfactor/quadratize.hpp"

namespace qfactor {

// What an analog annealer does to a logical Qubo: a bounded programmable
// coefficient range with limited precision, per-coefficient noise, and
// logical variables embedded as ferromagnetic chains of physical qubits.
struct HardwareModel {
  double coeff_range = 1.0;   // programmable interval is [-coeff_range, coeff_range]
  int precision_bits = 5;     // grid step = coeff_range / 2^(precision_bits - 1)
  double noise_sigma = 0.0;   // Gaussian sigma applied per nonzero coefficient
  int chain_length = 1;       // physical qubits per logical variable
  long long param_chain = 0;  // chain coupling strength, pre-scaling units
  std::uint64_t seed = 0;     // default noise seed (degrade takes an explicit one)

  void validate() const;

  std::string to_config() const;
  static HardwareModel from_config(const ConfigMap& cfg);  // throws ConfigError

  friend bool operator==(const HardwareModel&, const HardwareModel&) = default;
};

// The physical-program image of a Qubo after embedding, scaling,
// quantization, and noise. Physical variables are dense ints; logical
// variable i owns the contiguous chain chains[i].
struct DegradedQubo {
  std::vector<double> linear;                      // indexed by physical id
  std::map<std::pair<int, int>, double> quadratic;  // keys i < j, zeros dropped
  double scale_factor = 1.0;
  std::vector<VarId> logical_vars;       // sorted
  std::vector<std::vector<int>> chains;  // parallel to logical_vars

  int num_physical() const { return static_cast<int>(linear.size()); }
  const std::vector<int>& chain_for(VarId v) const;  // throws MissingVariable

  // Energy of a physical 0/1 state (one entry per physical id). The logical
  // constant offset was dropped by degrade, so this is offset-free.
  double energy(const std::vector<std::uint8_t>& physical) const;

  friend bool operator==(const DegradedQubo&, const DegradedQubo&) = default;
};

// Majority-vote readout of one physical state back to logical variables.
struct ChainDecode {
  Assignment logical;
  bool intact = true;            // every chain unanimous
  int break_count = 0;           // number of non-unanimous chains
  std::vector<VarId> broken;     // their logical ids, sorted
};

// Applies the degradation pipeline in order:
//   1. drop the constant offset;
//   2. expand each logical variable into a chain of `chain_length` physical
//      qubits: the linear coefficient splits evenly across members
//      (remainder to the first), logical couplings attach to first members,
//      and consecutive members get the agreement penalty
//      param_chain * (u + v - 2 u v), which is 0 on agreement and
//      param_chain per disagreeing bond;
//   3. scale uniformly so the largest |coefficient| (chain terms included)
//      lands exactly on coeff_range;
//   4. quantize every coefficient to the precision grid, rounding half away
//      from zero;
//   5. add seeded Gaussian noise to each coefficient still nonzero on the
//      grid (sigma = 0 adds nothing and consumes no randomness).
DegradedQubo degrade(const Qubo& q, const HardwareModel& hw, std::uint64_t seed);

// Step 3's factor on its own: coeff_range / max |pre-scaling coefficient|.
double compute_scale_factor(const Qubo& q, const HardwareModel& hw);

// Largest and smallest nonzero |coefficient| over linear + quadratic terms
// (offset excluded), plus their ratio. Throws std::invalid_argument on a
// Qubo with no terms.
struct DynamicRange {
  Coeff max_abs{0};
  Coeff min_abs_nonzero{0};
  double ratio = 0.0;
};

DynamicRange dynamic_range(const Qubo& q);

// Nearest grid point, half away from zero: step * round(value / step) with
// step = coeff_range / 2^(precision_bits - 1).
double quantize_coefficient(double value, double coeff_range, int precision_bits);

ChainDecode decode_chains(const DegradedQubo& d, const std::vector<std::uint8_t>& physical);

}  // namespace qfactor
