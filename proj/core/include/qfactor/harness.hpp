#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qfactor/config.hpp"
#include "qfactor/hardware.hpp"
#include "qfactor/objective.hpp"
#include "qfactor/solve.hpp"

namespace qfactor {

// How the penalty weight S is chosen for each sweep run.
enum class SRule { ThirdOfParamChain, Fixed, SafeBound };

struct SRuleSpec {
  SRule rule = SRule::ThirdOfParamChain;
  Coeff fixed_value{0};

  // ThirdOfParamChain is floor(param_chain / 3), clamped up to the minimum
  // legal weight of 1 for degenerate grid points below 3.
  Coeff resolve(long long param_chain, const Coeff& safe_bound) const;

  std::string to_string() const;  // "third_of_param_chain" | "fixed:<v>" | "safe_bound"
  static SRuleSpec from_string(std::string_view text);  // throws ConfigError

  friend bool operator==(const SRuleSpec&, const SRuleSpec&) = default;
};

// Inclusive arithmetic progression of param_chain values.
struct GridSpec {
  long long start = 0;
  long long stop_inclusive = 0;
  long long step = 1;

  void validate() const;
  std::vector<long long> points() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class SolverKind { Exact, SA };

std::string solver_kind_to_string(SolverKind kind);
SolverKind solver_kind_from_string(std::string_view text);  // throws ConfigError

// Full description of a parameter sweep: which objective, which param_chain
// grids (non-overlapping), how S follows param_chain, the hardware model
// each run is degraded through, and how each degraded instance is solved.
struct SweepConfig {
  ProblemSpec spec;
  std::vector<GridSpec> grids;
  SRuleSpec s_rule;
  HardwareModel hardware;  // its param_chain is a placeholder; runs override it
  SolverKind solver = SolverKind::SA;
  AnnealSchedule schedule;  // its seed is a placeholder; runs override it
  int samples_per_run = 200;

  void validate() const;  // throws ConfigError

  std::string to_config() const;
  static SweepConfig from_config(const ConfigMap& cfg);

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

// Outcome of one grid point. Reproducible from (config, master_seed):
// the run's degrade seed is master_seed + 1000003 * run_index and the
// annealer seed is that plus one.
struct RunRecord {
  int run_index = 0;
  long long param_chain = 0;
  Coeff s{0};
  double scale_factor = 0.0;
  Coeff range_max{0};
  Coeff range_min{0};
  double range_ratio = 0.0;
  int distinct_count = 0;
  int valid_count = 0;
  double best_energy = 0.0;
  long long best_x = 0;
  long long best_y = 0;
  double mean_breaks = 0.0;
  bool saturated = false;  // chain coupling quantized to the top of the range
  std::uint64_t seed = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct SweepSummary {
  int total_runs = 0;
  long long total_valid = 0;
  bool any_success = false;
  long long first_success_param_chain = 0;
  Coeff first_success_s{0};

  friend bool operator==(const SweepSummary&, const SweepSummary&) = default;
};

struct RunReport {
  int format_version = 1;
  std::string generated_at;  // ISO-8601 UTC; outside the determinism contract
  std::uint64_t master_seed = 0;
  SweepConfig config;
  std::vector<RunRecord> runs;
  SweepSummary summary;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

RunReport run_sweep(const SweepConfig& cfg, std::uint64_t master_seed);

enum class ReportFormat { Json, Csv };

// JSON carries the whole report (exact integers as decimal strings) and
// round-trips through parse_report_json. CSV is the flat per-run table:
//   param_chain,s,scale_factor,range_ratio,distinct,valid,best_energy,x,y
std::string emit_report(const RunReport& report, ReportFormat format);
RunReport parse_report_json(std::string_view text);  // throws ParseError

// Exact decomposition rows for (n, x, y) triples.
struct Table1Entry {
  long long n = 0;
  long long x = 0;
  long long y = 0;
  Table1Row row;
};

std::vector<Table1Entry> run_table1(const std::vector<std::array<long long, 3>>& cases);
std::string format_table1(const std::vector<Table1Entry>& entries);

// The reduced 3-bit by 4-bit configuration at param_chain = 450, S = 150.
// `undegraded` is a reference solve of the ideal objective (quadratized at a
// sound penalty weight); `degraded` solves the S = 150 instance after the
// hardware model is applied. Dynamic range of the S = 150 instance is
// compared against the full 4-bit by 4-bit encoding of the same n.
HardwareModel preset_3x4_hardware();

struct Preset3x4Report {
  ProblemSpec spec;
  Coeff penalty_s{0};
  HardwareModel hardware;
  SolveResult<Coeff> undegraded;
  SolveResult<double> degraded;
  DynamicRange range_reduced;
  DynamicRange range_full;
  double scale_factor = 0.0;
  bool undegraded_success = false;
  bool degraded_success = false;
};

Preset3x4Report run_preset_3x4(long long n, const HardwareModel& hw = preset_3x4_hardware());
std::string format_preset_3x4(const Preset3x4Report& report);

}  // namespace qfactor
