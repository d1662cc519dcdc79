#include "qfactor/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qfactor/errors.hpp"
#include "qfactor/quadratize.hpp"

namespace qfactor {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string iso_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Coeff SRuleSpec::resolve(long long param_chain, const Coeff& safe_bound) const {
  switch (rule) {
    case SRule::ThirdOfParamChain: return std::max(Coeff(1), Coeff(param_chain / 3));
    case SRule::Fixed: return fixed_value;
    case SRule::SafeBound: return safe_bound;
  }
  throw std::logic_error("SRuleSpec: bad enum value");
}

std::string SRuleSpec::to_string() const {
  switch (rule) {
    case SRule::ThirdOfParamChain: return "third_of_param_chain";
    case SRule::Fixed: return "fixed:" + coeff_to_string(fixed_value);
    case SRule::SafeBound: return "safe_bound";
  }
  throw std::logic_error("SRuleSpec: bad enum value");
}

SRuleSpec SRuleSpec::from_string(std::string_view text) {
  if (text == "third_of_param_chain") return SRuleSpec{SRule::ThirdOfParamChain, Coeff(0)};
  if (text == "safe_bound") return SRuleSpec{SRule::SafeBound, Coeff(0)};
  if (text.substr(0, 6) == "fixed:") {
    Coeff v;
    try {
      v = coeff_from_string(text.substr(6));
    } catch (const ParseError& e) {
      throw ConfigError(std::string("s_rule: ") + e.what());
    }
    if (v < 1) throw ConfigError("s_rule: fixed value must be >= 1");
    return SRuleSpec{SRule::Fixed, v};
  }
  throw ConfigError("s_rule: expected third_of_param_chain, safe_bound, or fixed:<int>");
}

void GridSpec::validate() const {
  if (start < 0) throw ConfigError("grid: start must be >= 0");
  if (stop_inclusive < start) throw ConfigError("grid: stop must be >= start");
  if (step < 1) throw ConfigError("grid: step must be >= 1");
}

std::vector<long long> GridSpec::points() const {
  validate();
  std::vector<long long> out;
  for (long long v = start; v <= stop_inclusive; v += step) out.push_back(v);
  return out;
}

std::string solver_kind_to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Exact: return "exact";
    case SolverKind::SA: return "sa";
  }
  throw std::logic_error("solver_kind_to_string: bad enum value");
}

SolverKind solver_kind_from_string(std::string_view text) {
  if (text == "exact") return SolverKind::Exact;
  if (text == "sa") return SolverKind::SA;
  throw ConfigError("solver: expected 'exact' or 'sa'");
}

void SweepConfig::validate() const {
  try {
    spec.validate();
    hardware.validate();
    schedule.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (samples_per_run < 1) throw ConfigError("samples_per_run must be >= 1");
  if (grids.empty()) throw ConfigError("sweep needs at least one grid");
  for (const auto& g : grids) g.validate();
  std::vector<GridSpec> sorted = grids;
  std::sort(sorted.begin(), sorted.end(),
            [](const GridSpec& a, const GridSpec& b) { return a.start < b.start; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i].stop_inclusive >= sorted[i + 1].start) {
      throw ConfigError("grids overlap: [" + std::to_string(sorted[i].start) + ", " +
                        std::to_string(sorted[i].stop_inclusive) + "] and [" +
                        std::to_string(sorted[i + 1].start) + ", " +
                        std::to_string(sorted[i + 1].stop_inclusive) + "]");
    }
  }
}

std::string SweepConfig::to_config() const {
  ConfigMap cfg;
  cfg.add_int64("n", spec.n);
  cfg.add_int64("x_bits", spec.x_bits);
  cfg.add_int64("y_bits", spec.y_bits);
  cfg.add("variant", variant_to_string(spec.variant));
  for (const auto& g : grids) {
    cfg.add("grid", std::to_string(g.start) + " " + std::to_string(g.stop_inclusive) + " " +
                        std::to_string(g.step));
  }
  cfg.add("s_rule", s_rule.to_string());
  cfg.add("solver", solver_kind_to_string(solver));
  cfg.add_int64("samples_per_run", samples_per_run);
  cfg.add_double("coeff_range", hardware.coeff_range);
  cfg.add_int64("precision_bits", hardware.precision_bits);
  cfg.add_double("noise_sigma", hardware.noise_sigma);
  cfg.add_int64("chain_length", hardware.chain_length);
  cfg.add_int64("param_chain", hardware.param_chain);
  cfg.add_int64("seed", static_cast<long long>(hardware.seed));
  cfg.add_int64("sweeps", schedule.sweeps);
  cfg.add_int64("restarts", schedule.restarts);
  cfg.add_double("beta_start", schedule.beta_start);
  cfg.add_double("beta_end", schedule.beta_end);
  return cfg.serialize();
}

SweepConfig SweepConfig::from_config(const ConfigMap& cfg) {
  SweepConfig out;
  out.spec = ProblemSpec::from_config(cfg);
  out.hardware = HardwareModel::from_config(cfg);
  for (const auto& text : cfg.get_all("grid")) {
    std::istringstream tokens(text);
    GridSpec g;
    std::string extra;
    if (!(tokens >> g.start >> g.stop_inclusive >> g.step) || (tokens >> extra)) {
      throw ConfigError("grid: expected '<start> <stop> <step>', got '" + text + "'");
    }
    out.grids.push_back(g);
  }
  if (auto v = cfg.get("s_rule")) out.s_rule = SRuleSpec::from_string(*v);
  if (auto v = cfg.get("solver")) out.solver = solver_kind_from_string(*v);
  out.samples_per_run = cfg.get_int("samples_per_run", out.samples_per_run);
  out.schedule.sweeps = cfg.get_int("sweeps", out.schedule.sweeps);
  out.schedule.restarts = cfg.get_int("restarts", out.schedule.restarts);
  out.schedule.beta_start = cfg.get_double("beta_start", out.schedule.beta_start);
  out.schedule.beta_end = cfg.get_double("beta_end", out.schedule.beta_end);
  out.validate();
  return out;
}

RunReport run_sweep(const SweepConfig& cfg, std::uint64_t master_seed) {
  cfg.validate();
  const MultilinearPoly objective = build_objective(cfg.spec);
  const Coeff safe_bound = safe_penalty_bound(objective);
  const double grid_step =
      cfg.hardware.coeff_range / std::ldexp(1.0, cfg.hardware.precision_bits - 1);

  RunReport report;
  report.generated_at = iso_utc_now();
  report.master_seed = master_seed;
  report.config = cfg;

  int run_index = 0;
  for (const auto& grid : cfg.grids) {
    for (long long param_chain : grid.points()) {
      RunRecord rec;
      rec.run_index = run_index;
      rec.param_chain = param_chain;
      rec.s = cfg.s_rule.resolve(param_chain, safe_bound);
      rec.seed = master_seed + 1000003ULL * static_cast<std::uint64_t>(run_index);

      const Qubo qubo = quadratize(objective, PenaltyWeight{rec.s});
      const DynamicRange range = dynamic_range(qubo);
      rec.range_max = range.max_abs;
      rec.range_min = range.min_abs_nonzero;
      rec.range_ratio = range.ratio;

      HardwareModel hw = cfg.hardware;
      hw.param_chain = param_chain;
      const DegradedQubo degraded = degrade(qubo, hw, rec.seed);
      rec.scale_factor = degraded.scale_factor;
      rec.saturated =
          hw.chain_length > 1 && param_chain > 0 &&
          quantize_coefficient(2.0 * static_cast<double>(param_chain) * degraded.scale_factor,
                               hw.coeff_range, hw.precision_bits) >= hw.coeff_range - grid_step / 2;

      SolveResult<double> result;
      if (cfg.solver == SolverKind::Exact) {
        result = solve_exact(degraded, cfg.spec);
      } else {
        AnnealSchedule sched = cfg.schedule;
        sched.seed = rec.seed + 1;
        result = solve_sa(degraded, cfg.spec, sched, cfg.samples_per_run);
      }

      rec.distinct_count = result.distinct_count;
      rec.valid_count = result.valid_count;
      rec.best_energy = result.best_energy;
      double breaks = 0.0;
      const Sample<double>* best = nullptr;
      for (const auto& s : result.samples) {
        breaks += s.break_count;
        if (best == nullptr || s.energy < best->energy) best = &s;
      }
      rec.mean_breaks = result.samples.empty() ? 0.0 : breaks / result.samples.size();
      if (best != nullptr) {
        rec.best_x = best->x;
        rec.best_y = best->y;
      }

      report.summary.total_valid += rec.valid_count;
      if (rec.valid_count > 0 && !report.summary.any_success) {
        report.summary.any_success = true;
        report.summary.first_success_param_chain = rec.param_chain;
        report.summary.first_success_s = rec.s;
      }
      report.runs.push_back(std::move(rec));
      ++run_index;
    }
  }
  report.summary.total_runs = run_index;
  return report;
}

namespace {

ordered_json config_to_json(const SweepConfig& cfg) {
  ordered_json spec{{"n", cfg.spec.n},
                    {"x_bits", cfg.spec.x_bits},
                    {"y_bits", cfg.spec.y_bits},
                    {"variant", variant_to_string(cfg.spec.variant)}};
  ordered_json grids = ordered_json::array();
  for (const auto& g : cfg.grids) {
    grids.push_back(
        ordered_json{{"start", g.start}, {"stop", g.stop_inclusive}, {"step", g.step}});
  }
  ordered_json hardware{{"coeff_range", cfg.hardware.coeff_range},
                        {"precision_bits", cfg.hardware.precision_bits},
                        {"noise_sigma", cfg.hardware.noise_sigma},
                        {"chain_length", cfg.hardware.chain_length},
                        {"param_chain", cfg.hardware.param_chain},
                        {"seed", cfg.hardware.seed}};
  ordered_json schedule{{"sweeps", cfg.schedule.sweeps},
                        {"restarts", cfg.schedule.restarts},
                        {"beta_start", cfg.schedule.beta_start},
                        {"beta_end", cfg.schedule.beta_end}};
  return ordered_json{{"spec", std::move(spec)},
                      {"grids", std::move(grids)},
                      {"s_rule", cfg.s_rule.to_string()},
                      {"hardware", std::move(hardware)},
                      {"solver", solver_kind_to_string(cfg.solver)},
                      {"schedule", std::move(schedule)},
                      {"samples_per_run", cfg.samples_per_run}};
}

SweepConfig config_from_json(const ordered_json& j) {
  SweepConfig cfg;
  const auto& spec = j.at("spec");
  cfg.spec.n = spec.at("n").get<long long>();
  cfg.spec.x_bits = spec.at("x_bits").get<int>();
  cfg.spec.y_bits = spec.at("y_bits").get<int>();
  cfg.spec.variant = variant_from_string(spec.at("variant").get<std::string>());
  for (const auto& g : j.at("grids")) {
    cfg.grids.push_back(GridSpec{g.at("start").get<long long>(), g.at("stop").get<long long>(),
                                 g.at("step").get<long long>()});
  }
  cfg.s_rule = SRuleSpec::from_string(j.at("s_rule").get<std::string>());
  const auto& hw = j.at("hardware");
  cfg.hardware.coeff_range = hw.at("coeff_range").get<double>();
  cfg.hardware.precision_bits = hw.at("precision_bits").get<int>();
  cfg.hardware.noise_sigma = hw.at("noise_sigma").get<double>();
  cfg.hardware.chain_length = hw.at("chain_length").get<int>();
  cfg.hardware.param_chain = hw.at("param_chain").get<long long>();
  cfg.hardware.seed = hw.at("seed").get<std::uint64_t>();
  cfg.solver = solver_kind_from_string(j.at("solver").get<std::string>());
  const auto& sched = j.at("schedule");
  cfg.schedule.sweeps = sched.at("sweeps").get<int>();
  cfg.schedule.restarts = sched.at("restarts").get<int>();
  cfg.schedule.beta_start = sched.at("beta_start").get<double>();
  cfg.schedule.beta_end = sched.at("beta_end").get<double>();
  cfg.samples_per_run = j.at("samples_per_run").get<int>();
  return cfg;
}

}  // namespace

std::string emit_report(const RunReport& report, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::string out = "param_chain,s,scale_factor,range_ratio,distinct,valid,best_energy,x,y\n";
    for (const auto& r : report.runs) {
      out += std::to_string(r.param_chain) + "," + coeff_to_string(r.s) + "," +
             energy_to_string(r.scale_factor) + "," + energy_to_string(r.range_ratio) + "," +
             std::to_string(r.distinct_count) + "," + std::to_string(r.valid_count) + "," +
             energy_to_string(r.best_energy) + "," + std::to_string(r.best_x) + "," +
             std::to_string(r.best_y) + "\n";
    }
    return out;
  }

  ordered_json runs = ordered_json::array();
  for (const auto& r : report.runs) {
    runs.push_back(ordered_json{{"run_index", r.run_index},
                                {"param_chain", r.param_chain},
                                {"s", coeff_to_string(r.s)},
                                {"scale_factor", r.scale_factor},
                                {"range_max", coeff_to_string(r.range_max)},
                                {"range_min", coeff_to_string(r.range_min)},
                                {"range_ratio", r.range_ratio},
                                {"distinct", r.distinct_count},
                                {"valid", r.valid_count},
                                {"best_energy", r.best_energy},
                                {"x", r.best_x},
                                {"y", r.best_y},
                                {"mean_breaks", r.mean_breaks},
                                {"saturated", r.saturated},
                                {"seed", r.seed}});
  }
  ordered_json summary{{"total_runs", report.summary.total_runs},
                       {"total_valid", report.summary.total_valid}};
  if (report.summary.any_success) {
    summary["first_success"] =
        ordered_json{{"param_chain", report.summary.first_success_param_chain},
                     {"s", coeff_to_string(report.summary.first_success_s)}};
  } else {
    summary["first_success"] = nullptr;
  }
  ordered_json j{{"format_version", report.format_version},
                 {"generated_at", report.generated_at},
                 {"master_seed", report.master_seed},
                 {"config", config_to_json(report.config)},
                 {"runs", std::move(runs)},
                 {"summary", std::move(summary)}};
  return j.dump(2) + "\n";
}

RunReport parse_report_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("report: invalid JSON: ") + e.what());
  }
  try {
    RunReport report;
    report.format_version = j.at("format_version").get<int>();
    if (report.format_version != 1) {
      throw ParseError("report: unsupported format_version " +
                       std::to_string(report.format_version));
    }
    report.generated_at = j.at("generated_at").get<std::string>();
    report.master_seed = j.at("master_seed").get<std::uint64_t>();
    report.config = config_from_json(j.at("config"));
    for (const auto& r : j.at("runs")) {
      RunRecord rec;
      rec.run_index = r.at("run_index").get<int>();
      rec.param_chain = r.at("param_chain").get<long long>();
      rec.s = coeff_from_string(r.at("s").get<std::string>());
      rec.scale_factor = r.at("scale_factor").get<double>();
      rec.range_max = coeff_from_string(r.at("range_max").get<std::string>());
      rec.range_min = coeff_from_string(r.at("range_min").get<std::string>());
      rec.range_ratio = r.at("range_ratio").get<double>();
      rec.distinct_count = r.at("distinct").get<int>();
      rec.valid_count = r.at("valid").get<int>();
      rec.best_energy = r.at("best_energy").get<double>();
      rec.best_x = r.at("x").get<long long>();
      rec.best_y = r.at("y").get<long long>();
      rec.mean_breaks = r.at("mean_breaks").get<double>();
      rec.saturated = r.at("saturated").get<bool>();
      rec.seed = r.at("seed").get<std::uint64_t>();
      report.runs.push_back(std::move(rec));
    }
    const auto& summary = j.at("summary");
    report.summary.total_runs = summary.at("total_runs").get<int>();
    report.summary.total_valid = summary.at("total_valid").get<long long>();
    const auto& first = summary.at("first_success");
    if (!first.is_null()) {
      report.summary.any_success = true;
      report.summary.first_success_param_chain = first.at("param_chain").get<long long>();
      report.summary.first_success_s = coeff_from_string(first.at("s").get<std::string>());
    }
    return report;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("report: bad structure: ") + e.what());
  }
}

std::vector<Table1Entry> run_table1(const std::vector<std::array<long long, 3>>& cases) {
  std::vector<Table1Entry> out;
  out.reserve(cases.size());
  for (const auto& [n, x, y] : cases) {
    out.push_back(Table1Entry{n, x, y, table1_decomposition(n, x, y)});
  }
  return out;
}

std::string format_table1(const std::vector<Table1Entry>& entries) {
  std::vector<std::array<std::string, 7>> rows;
  rows.push_back({"n", "x", "y", "product_term", "shift_term", "tie_term", "quarter_sum"});
  for (const auto& e : entries) {
    rows.push_back({std::to_string(e.n), std::to_string(e.x), std::to_string(e.y),
                    coeff_to_string(e.row.term_a), coeff_to_string(e.row.term_b),
                    coeff_to_string(e.row.term_c),
                    e.row.integral ? coeff_to_string(e.row.quarter)
                                   : coeff_to_string(e.row.sum4) + "/4"});
  }
  std::array<std::size_t, 7> widths{};
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += "  ";
      out += std::string(widths[c] - row[c].size(), ' ') + row[c];
    }
    out += '\n';
  }
  return out;
}

HardwareModel preset_3x4_hardware() {
  HardwareModel hw;
  hw.coeff_range = 1.0;
  hw.precision_bits = 5;
  hw.noise_sigma = 0.0;
  hw.chain_length = 1;
  hw.param_chain = 450;
  return hw;
}

Preset3x4Report run_preset_3x4(long long n, const HardwareModel& hw) {
  Preset3x4Report report;
  report.spec = ProblemSpec::preset_3x4(n);
  report.penalty_s = 150;
  report.hardware = hw;

  const MultilinearPoly objective = build_objective(report.spec);
  const Qubo qubo = quadratize(objective, PenaltyWeight{report.penalty_s});
  report.range_reduced = dynamic_range(qubo);

  const ProblemSpec full_spec{n, 4, 4, report.spec.variant};
  const Qubo full_qubo = quadratize(build_objective(full_spec), PenaltyWeight{report.penalty_s});
  report.range_full = dynamic_range(full_qubo);

  // Reference solve of the ideal objective. S = 150 is a hardware-run
  // setting, far below the bound that makes ancilla violations unprofitable,
  // so the reference uses a sound weight; the degraded leg keeps the preset's.
  const Qubo sound = quadratize(objective, PenaltyWeight{safe_penalty_bound(objective)});
  report.undegraded = solve_exact(sound, report.spec);
  report.undegraded_success = report.undegraded.valid_count > 0;

  const DegradedQubo degraded = degrade(qubo, hw, hw.seed);
  report.scale_factor = degraded.scale_factor;
  report.degraded = solve_exact(degraded, report.spec);
  report.degraded_success = report.degraded.valid_count > 0;
  return report;
}

std::string format_preset_3x4(const Preset3x4Report& report) {
  std::string out;
  out += "n = " + std::to_string(report.spec.n) + ", encoding " +
         std::to_string(report.spec.x_bits) + "x" + std::to_string(report.spec.y_bits) +
         " bits, param_chain = " + std::to_string(report.hardware.param_chain) +
         ", S = " + coeff_to_string(report.penalty_s) + "\n";
  auto describe = [](const char* label, bool success, long long x, long long y,
                     const std::string& energy) {
    std::string line(label);
    line += success ? ": factored, x = " + std::to_string(x) + ", y = " + std::to_string(y)
                    : ": no valid factoring";
    line += " (best energy " + energy + ")\n";
    return line;
  };
  const auto& ub = report.undegraded.samples.front();
  out += describe("undegraded exact", report.undegraded_success, ub.x, ub.y,
                  energy_to_string(report.undegraded.best_energy));
  const auto& db = report.degraded.samples.front();
  out += describe("degraded exact  ", report.degraded_success, db.x, db.y,
                  energy_to_string(report.degraded.best_energy));
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "dynamic range %dx%d: %.6g   (4x4 of same n: %.6g)\nscale_factor: %.6g\n",
                report.spec.x_bits, report.spec.y_bits, report.range_reduced.ratio,
                report.range_full.ratio, report.scale_factor);
  out += buf;
  return out;
}

}  // namespace qfactor
