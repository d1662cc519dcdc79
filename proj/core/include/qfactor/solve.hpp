#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qfactor/hardware.hpp"
#include "qfactor/objective.hpp"
#include "qfactor/quadratize.hpp"

namespace qfactor {

struct ExactOptions {
  int max_variables = 26;                  // VariableCountExceeded beyond this
  std::size_t max_ground_states = 1u << 20;  // tie storage cap
  void validate() const;
};

// Geometric single-flip Metropolis schedule. Non-positive betas mean "derive
// from the instance": beta_start = 0.01 / max |coefficient| and beta_end =
// 10 / min nonzero |coefficient|. Sample k seeds its own generator with
// seed + k, so samples are independent of each other and of sample count.
struct AnnealSchedule {
  int sweeps = 2000;
  int restarts = 1;  // best state across restarts is kept
  double beta_start = 0.0;
  double beta_end = 0.0;
  std::uint64_t seed = 0;

  void validate() const;

  friend bool operator==(const AnnealSchedule&, const AnnealSchedule&) = default;
};

// One solver outcome. `state` holds one bit per solved variable slot: the
// sorted logical variables for a Qubo, physical ids for a DegradedQubo.
// `energy` is always recomputed from scratch on the final state; the solvers
// verify it against their incrementally tracked value before returning.
// Chains are majority-decoded, and a sample is valid when every chain is
// intact and the decoded factors satisfy x * y = n.
template <typename E>
struct Sample {
  std::vector<std::uint8_t> state;
  E energy{};
  long long x = 0;
  long long y = 0;
  bool intact = true;
  bool valid = false;
  int break_count = 0;
  std::vector<VarId> broken_chains;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// For the exhaustive solver, `samples` is the complete set of tied minima
// (up to the storage cap; ground_state_count keeps the true total). For the
// annealer it is one entry per requested sample.
template <typename E>
struct SolveResult {
  std::vector<Sample<E>> samples;
  E best_energy{};
  int valid_count = 0;
  int distinct_count = 0;
  std::uint64_t ground_state_count = 0;
  bool ground_states_truncated = false;

  friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

// Exhaustive enumeration in Gray-code order with O(1) incremental energy
// updates per step; finds every tied minimum.
SolveResult<Coeff> solve_exact(const Qubo& q, const ProblemSpec& spec,
                               const ExactOptions& opts = {});
SolveResult<double> solve_exact(const DegradedQubo& d, const ProblemSpec& spec,
                                const ExactOptions& opts = {});

// Seeded simulated annealing; identical inputs give identical results.
SolveResult<Coeff> solve_sa(const Qubo& q, const ProblemSpec& spec, const AnnealSchedule& sched,
                            int num_samples);
SolveResult<double> solve_sa(const DegradedQubo& d, const ProblemSpec& spec,
                             const AnnealSchedule& sched, int num_samples);

// Number of equivalence classes among samples under "same decoded (x, y) and
// same set of broken chains".
template <typename E>
int count_distinct(const std::vector<Sample<E>>& samples) {
  std::set<std::tuple<std::vector<VarId>, long long, long long>> classes;
  for (const auto& s : samples) classes.emplace(s.broken_chains, s.x, s.y);
  return static_cast<int>(classes.size());
}

inline std::string energy_to_string(const Coeff& e) { return coeff_to_string(e); }
std::string energy_to_string(double e);

// One row per sample: sample_index,energy,x,y,valid,intact,break_count
template <typename E>
std::string to_csv(const SolveResult<E>& result) {
  std::string out = "sample_index,energy,x,y,valid,intact,break_count\n";
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    const auto& s = result.samples[i];
    out += std::to_string(i) + "," + energy_to_string(s.energy) + "," + std::to_string(s.x) +
           "," + std::to_string(s.y) + "," + (s.valid ? "1" : "0") + "," +
           (s.intact ? "1" : "0") + "," + std::to_string(s.break_count) + "\n";
  }
  return out;
}

}  // namespace qfactor
