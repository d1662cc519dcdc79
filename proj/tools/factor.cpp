#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qfactor/errors.hpp"
#include "qfactor/harness.hpp"
#include "qfactor/hardware.hpp"
#include "qfactor/objective.hpp"
#include "qfactor/quadratize.hpp"
#include "qfactor/solve.hpp"

namespace {

using namespace qfactor;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCapacity = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

// "15:3,5" -> {15, 3, 5}
std::array<long long, 3> parse_table1_case(const std::string& text) {
  const auto colon = text.find(':');
  const auto comma = text.find(',', colon == std::string::npos ? 0 : colon);
  if (colon == std::string::npos || comma == std::string::npos || comma < colon) {
    throw ConfigError("expected N:x,y, got '" + text + "'");
  }
  auto number = [&text](std::size_t begin, std::size_t end) {
    const std::string part = text.substr(begin, end - begin);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("expected integer, got '" + part + "' in '" + text + "'");
    }
  };
  return {number(0, colon), number(colon + 1, comma), number(comma + 1, text.size())};
}

struct SolveArgs {
  long long n = 15;
  std::string variant = "EQ2";
  int x_bits = 4;
  int y_bits = 4;
  std::string solver = "exact";
  std::string s_value = "safe";
  int samples = 200;
  int sweeps = 2000;
  int restarts = 1;
  std::uint64_t seed = 0;
  double coeff_range = 1.0;
  int precision_bits = 5;
  double noise_sigma = 0.0;
  int chain_length = 1;
  long long param_chain = 0;
  bool degraded = false;
  std::string dump_qubo;
  std::string csv_out;
};

Coeff resolve_penalty(const std::string& s_value, const MultilinearPoly& objective) {
  if (s_value == "safe") return safe_penalty_bound(objective);
  return coeff_from_string(s_value);
}

template <typename E>
void print_result(const SolveResult<E>& result, bool exact) {
  std::cout << "best energy: " << energy_to_string(result.best_energy) << "\n";
  const Sample<E>* best = nullptr;
  for (const auto& s : result.samples) {
    if (best == nullptr || s.energy < best->energy) best = &s;
  }
  if (best != nullptr) {
    std::cout << "best decode: x = " << best->x << ", y = " << best->y
              << (best->valid ? "  (valid factoring)" : "") << "\n";
  }
  if (exact) {
    std::cout << "ground states: " << result.ground_state_count
              << (result.ground_states_truncated ? " (sample list truncated)" : "") << "\n";
  }
  std::cout << "samples: " << result.samples.size() << "  valid: " << result.valid_count
            << "  distinct: " << result.distinct_count << "\n";
}

int cmd_solve(const SolveArgs& args) {
  ProblemSpec spec{args.n, args.x_bits, args.y_bits, variant_from_string(args.variant)};
  spec.validate();

  const MultilinearPoly objective = build_objective(spec);
  const Coeff s = resolve_penalty(args.s_value, objective);
  const Qubo qubo = quadratize(objective, PenaltyWeight{s});
  const DynamicRange range = dynamic_range(qubo);

  std::cout << "objective: " << variant_to_string(spec.variant) << "  n = " << spec.n
            << "  encoding " << spec.x_bits << "x" << spec.y_bits << " bits\n";
  std::cout << "qubo: " << qubo.variables().size() << " variables ("
            << qubo.ancilla_defs.size() << " ancillas), S = " << coeff_to_string(s)
            << (args.s_value == "safe" ? " (safe bound)" : "") << "\n";
  std::cout << "dynamic range: max = " << coeff_to_string(range.max_abs)
            << ", min = " << coeff_to_string(range.min_abs_nonzero) << ", ratio = ";
  std::printf("%.6g\n", range.ratio);

  if (!args.dump_qubo.empty()) {
    write_file(args.dump_qubo, qubo.to_text());
    std::cout << "couplings written to " << args.dump_qubo << "\n";
  }

  AnnealSchedule sched;
  sched.sweeps = args.sweeps;
  sched.restarts = args.restarts;
  sched.seed = args.seed;
  const bool use_sa = args.solver == "sa";

  if (args.degraded) {
    HardwareModel hw;
    hw.coeff_range = args.coeff_range;
    hw.precision_bits = args.precision_bits;
    hw.noise_sigma = args.noise_sigma;
    hw.chain_length = args.chain_length;
    hw.param_chain = args.param_chain;
    hw.validate();
    const DegradedQubo degraded = degrade(qubo, hw, args.seed);
    std::cout << "degraded: " << degraded.num_physical() << " physical variables, scale_factor = ";
    std::printf("%.6g", degraded.scale_factor);
    std::cout << ", precision " << hw.precision_bits << " bits\n";
    SolveResult<double> result = use_sa ? solve_sa(degraded, spec, sched, args.samples)
                                        : solve_exact(degraded, spec);
    print_result(result, !use_sa);
    if (!args.csv_out.empty()) write_file(args.csv_out, to_csv(result));
  } else {
    SolveResult<Coeff> result =
        use_sa ? solve_sa(qubo, spec, sched, args.samples) : solve_exact(qubo, spec);
    print_result(result, !use_sa);
    if (!args.csv_out.empty()) write_file(args.csv_out, to_csv(result));
  }
  if (!args.csv_out.empty()) std::cout << "samples written to " << args.csv_out << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, std::uint64_t seed, const std::string& out_path,
              const std::string& format, bool paper_scale) {
  SweepConfig cfg = SweepConfig::from_config(ConfigMap::parse(read_file(config_path)));
  if (paper_scale) cfg.samples_per_run = 1000;
  const RunReport report = run_sweep(cfg, seed);
  const ReportFormat fmt = format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
  const std::string body = emit_report(report, fmt);
  if (out_path.empty()) {
    std::cout << body;
  } else {
    write_file(out_path, body);
    std::cout << "report written to " << out_path << " (" << report.summary.total_runs
              << " runs, " << report.summary.total_valid << " valid samples";
    if (report.summary.any_success) {
      std::cout << ", first success at param_chain = "
                << report.summary.first_success_param_chain
                << ", S = " << coeff_to_string(report.summary.first_success_s);
    }
    std::cout << ")\n";
  }
  return kExitOk;
}

int cmd_diagnose(long long n, const std::string& variant, int x_bits, int y_bits,
                 const std::string& s_value, double coeff_range, int precision_bits,
                 int chain_length, long long param_chain) {
  ProblemSpec spec{n, x_bits, y_bits, variant_from_string(variant)};
  spec.validate();
  const MultilinearPoly objective = build_objective(spec);
  const Coeff s = resolve_penalty(s_value, objective);
  const Qubo qubo = quadratize(objective, PenaltyWeight{s});
  const DynamicRange range = dynamic_range(qubo);

  std::cout << "objective: " << variant_to_string(spec.variant) << "  n = " << n << "  encoding "
            << x_bits << "x" << y_bits << " bits, degree " << objective.degree() << ", "
            << objective.term_count() << " terms\n";
  std::cout << "qubo: " << qubo.variables().size() << " variables ("
            << qubo.ancilla_defs.size() << " ancillas), S = " << coeff_to_string(s) << "\n";
  std::cout << "dynamic range: max = " << coeff_to_string(range.max_abs)
            << ", min = " << coeff_to_string(range.min_abs_nonzero) << ", ratio = ";
  std::printf("%.6g\n", range.ratio);

  HardwareModel hw;
  hw.coeff_range = coeff_range;
  hw.precision_bits = precision_bits;
  hw.chain_length = chain_length;
  hw.param_chain = param_chain;
  hw.validate();
  const double scale = compute_scale_factor(qubo, hw);
  const double step = coeff_range / std::ldexp(1.0, precision_bits - 1);
  std::printf("scale_factor: %.6g   grid step: %.6g\n", scale, step);

  // Unembedded view: how many logical coefficients survive quantization.
  HardwareModel flat = hw;
  flat.chain_length = 1;
  flat.param_chain = 0;
  const DegradedQubo flat_degraded = degrade(qubo, flat, 0);
  std::size_t zeroed = 0;
  for (double c : flat_degraded.linear) {
    if (c == 0.0) ++zeroed;
  }
  zeroed += qubo.quadratic.size() - flat_degraded.quadratic.size();
  const std::size_t total = flat_degraded.linear.size() + qubo.quadratic.size();
  std::cout << "coefficients quantized to zero: " << zeroed << " of " << total << "\n";

  // Histogram of |coefficient| by decimal decade.
  std::map<std::size_t, std::size_t> decades;
  auto feed = [&decades](const Coeff& c) {
    if (c == 0) return;
    ++decades[coeff_to_string(abs_coeff(c)).size() - 1];
  };
  for (const auto& [v, c] : qubo.linear) feed(c);
  for (const auto& [pair, c] : qubo.quadratic) feed(c);
  std::cout << "coefficient magnitudes by decade:\n";
  for (const auto& [decade, count] : decades) {
    std::printf("  1e%02zu..1e%02zu  %5zu  ", decade, decade + 1, count);
    const std::size_t bar = std::min<std::size_t>(60, count);
    std::cout << std::string(bar, '#') << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"odd-factor objectives, quadratization, and annealer degradation"};
  app.require_subcommand(1);

  // table1
  auto* table1 = app.add_subcommand("table1", "exact objective decomposition at integer points");
  std::vector<std::string> table1_cases;
  table1->add_option("--n", table1_cases, "case as N:x,y (repeatable)")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "build one instance and solve it");
  SolveArgs sa;
  solve->add_option("--n", sa.n, "odd integer to factor")->required();
  solve->add_option("--variant", sa.variant,
                    "EQ1, EQ2, SIMPLIFIED_NO_N2, or SIMPLIFIED_PLAIN (default EQ2)");
  solve->add_option("--x-bits", sa.x_bits, "x encoding width (default 4)");
  solve->add_option("--y-bits", sa.y_bits, "y encoding width (default 4)");
  solve->add_option("--solver", sa.solver, "exact or sa (default exact)")
      ->check(CLI::IsMember({"exact", "sa"}));
  solve->add_option("--s", sa.s_value, "penalty weight: integer or 'safe' (default safe)");
  solve->add_option("--samples", sa.samples, "annealer samples (default 200)");
  solve->add_option("--sweeps", sa.sweeps, "annealer sweeps per sample (default 2000)");
  solve->add_option("--restarts", sa.restarts, "annealer restarts per sample (default 1)");
  solve->add_option("--seed", sa.seed, "seed for noise and annealing (default 0)");
  auto* opt_range = solve->add_option("--coeff-range", sa.coeff_range,
                                      "degraded coefficient range (default 1.0)");
  auto* opt_prec = solve->add_option("--precision-bits", sa.precision_bits,
                                     "degraded coefficient precision (default 5)");
  auto* opt_noise = solve->add_option("--noise-sigma", sa.noise_sigma,
                                      "degraded per-coefficient noise sigma");
  auto* opt_chain = solve->add_option("--chain-length", sa.chain_length,
                                      "physical qubits per logical variable");
  auto* opt_pc = solve->add_option("--param-chain", sa.param_chain, "chain coupling strength");
  solve->add_option("--dump-qubo", sa.dump_qubo, "write the coupling list to a file");
  solve->add_option("--csv-out", sa.csv_out, "write per-sample results to a CSV file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a param_chain sweep from a config file");
  std::string sweep_config;
  std::uint64_t sweep_seed = 0;
  std::string sweep_out;
  std::string sweep_format = "json";
  bool paper_scale = false;
  sweep->add_option("--config", sweep_config, "sweep configuration file")->required();
  sweep->add_option("--seed", sweep_seed, "master seed (default 0)");
  sweep->add_option("--out", sweep_out, "output file (default stdout)");
  sweep->add_option("--format", sweep_format, "json or csv (default json)")
      ->check(CLI::IsMember({"json", "csv"}));
  sweep->add_flag("--paper-scale", paper_scale, "use 1000 samples per run");

  // diagnose
  auto* diagnose =
      app.add_subcommand("diagnose", "dynamic range and quantization report for one instance");
  long long dg_n = 15;
  std::string dg_variant = "EQ2";
  int dg_x_bits = 4;
  int dg_y_bits = 4;
  std::string dg_s = "safe";
  double dg_range = 1.0;
  int dg_prec = 5;
  int dg_chain = 1;
  long long dg_pc = 0;
  diagnose->add_option("--n", dg_n, "odd integer to factor")->required();
  diagnose->add_option("--variant", dg_variant, "objective variant (default EQ2)");
  diagnose->add_option("--x-bits", dg_x_bits, "x encoding width (default 4)");
  diagnose->add_option("--y-bits", dg_y_bits, "y encoding width (default 4)");
  diagnose->add_option("--s", dg_s, "penalty weight: integer or 'safe' (default safe)");
  diagnose->add_option("--coeff-range", dg_range, "coefficient range (default 1.0)");
  diagnose->add_option("--precision-bits", dg_prec, "coefficient precision (default 5)");
  diagnose->add_option("--chain-length", dg_chain, "physical qubits per logical variable");
  diagnose->add_option("--param-chain", dg_pc, "chain coupling strength");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (table1->parsed()) {
      std::vector<std::array<long long, 3>> cases;
      for (const auto& text : table1_cases) cases.push_back(parse_table1_case(text));
      std::cout << format_table1(run_table1(cases));
      return kExitOk;
    }
    if (solve->parsed()) {
      sa.degraded = opt_range->count() > 0 || opt_prec->count() > 0 || opt_noise->count() > 0 ||
                    opt_chain->count() > 0 || opt_pc->count() > 0;
      return cmd_solve(sa);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_config, sweep_seed, sweep_out, sweep_format, paper_scale);
    }
    if (diagnose->parsed()) {
      return cmd_diagnose(dg_n, dg_variant, dg_x_bits, dg_y_bits, dg_s, dg_range, dg_prec,
                          dg_chain, dg_pc);
    }
  } catch (const qfactor::VariableCountExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
