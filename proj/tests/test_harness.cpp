#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <string>
#include <vector>

#include "qfactor/errors.hpp"
#include "qfactor/harness.hpp"
#include "testutil.hpp"

using namespace qfactor;

namespace {

SweepConfig base_config() {
  SweepConfig cfg;
  cfg.spec = ProblemSpec{15, 4, 4, ObjectiveVariant::EQ2};
  cfg.grids = {GridSpec{450, 600, 150}};
  cfg.s_rule = SRuleSpec{SRule::ThirdOfParamChain, Coeff(0)};
  cfg.hardware = HardwareModel{};
  cfg.solver = SolverKind::SA;
  cfg.schedule.sweeps = 300;
  cfg.samples_per_run = 5;
  return cfg;
}

}  // namespace

TEST_CASE("grid points") {
  CHECK(GridSpec{10, 100, 10}.points() ==
        std::vector<long long>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100});
  CHECK(GridSpec{120, 300, 20}.points().size() == 10);
  CHECK(GridSpec{400, 11400, 100}.points().size() == 111);
  CHECK(GridSpec{300, 11400, 150}.points().size() == 75);
  CHECK(GridSpec{300, 9900, 300}.points().size() == 33);
  CHECK(GridSpec{7, 7, 1}.points() == std::vector<long long>{7});
  // stop short of an exact multiple
  CHECK(GridSpec{10, 29, 10}.points() == std::vector<long long>{10, 20});

  CHECK_THROWS_AS((GridSpec{10, 5, 1}.validate()), ConfigError);
  CHECK_THROWS_AS((GridSpec{10, 20, 0}.validate()), ConfigError);
  CHECK_THROWS_AS((GridSpec{-5, 20, 5}.validate()), ConfigError);
}

TEST_CASE("penalty weight rules") {
  const Coeff safe(42837241);
  SRuleSpec third{SRule::ThirdOfParamChain, Coeff(0)};
  CHECK(third.resolve(10, safe) == 3);
  CHECK(third.resolve(100, safe) == 33);
  CHECK(third.resolve(450, safe) == 150);
  CHECK(third.resolve(11400, safe) == 3800);
  CHECK(third.resolve(2, safe) == 1);  // clamped to the minimum legal weight

  SRuleSpec fixed{SRule::Fixed, Coeff(150)};
  CHECK(fixed.resolve(9999, safe) == 150);

  SRuleSpec bound{SRule::SafeBound, Coeff(0)};
  CHECK(bound.resolve(10, safe) == safe);

  CHECK(third.to_string() == "third_of_param_chain");
  CHECK(fixed.to_string() == "fixed:150");
  CHECK(bound.to_string() == "safe_bound");
  CHECK(SRuleSpec::from_string("third_of_param_chain") == third);
  CHECK(SRuleSpec::from_string("fixed:150") == fixed);
  CHECK(SRuleSpec::from_string("safe_bound") == bound);
  CHECK_THROWS_AS(SRuleSpec::from_string("fixed:0"), ConfigError);
  CHECK_THROWS_AS(SRuleSpec::from_string("fixed:abc"), ConfigError);
  CHECK_THROWS_AS(SRuleSpec::from_string("half"), ConfigError);
}

TEST_CASE("solver kind strings") {
  CHECK(solver_kind_to_string(SolverKind::Exact) == "exact");
  CHECK(solver_kind_to_string(SolverKind::SA) == "sa");
  CHECK(solver_kind_from_string("exact") == SolverKind::Exact);
  CHECK(solver_kind_from_string("sa") == SolverKind::SA);
  CHECK_THROWS_AS(solver_kind_from_string("quantum"), ConfigError);
}

TEST_CASE("sweep config round trip and validation") {
  SweepConfig cfg;
  cfg.spec = ProblemSpec{91, 3, 4, ObjectiveVariant::EQ1};
  cfg.grids = {GridSpec{10, 100, 10}, GridSpec{120, 300, 20}};
  cfg.s_rule = SRuleSpec{SRule::Fixed, Coeff(77)};
  cfg.hardware = HardwareModel{0.5, 7, 0.01, 2, 0, 3};
  cfg.solver = SolverKind::Exact;
  // schedule.seed stays 0: each run derives its own, so it is not persisted
  cfg.schedule = AnnealSchedule{1500, 2, 0.5, 20.0, 0};
  cfg.samples_per_run = 44;
  CHECK_NOTHROW(cfg.validate());

  SweepConfig back = SweepConfig::from_config(ConfigMap::parse(cfg.to_config()));
  CHECK(back == cfg);

  SweepConfig overlapping = cfg;
  overlapping.grids = {GridSpec{10, 100, 10}, GridSpec{50, 200, 50}};
  CHECK_THROWS_AS(overlapping.validate(), ConfigError);

  SweepConfig empty_grids = cfg;
  empty_grids.grids.clear();
  CHECK_THROWS_AS(empty_grids.validate(), ConfigError);

  SweepConfig bad_samples = cfg;
  bad_samples.samples_per_run = 0;
  CHECK_THROWS_AS(bad_samples.validate(), ConfigError);

  CHECK_THROWS_AS(SweepConfig::from_config(ConfigMap::parse("n = 15\n")), ConfigError);
}

TEST_CASE("decomposition runner and table formatting") {
  auto entries = run_table1({{15, 3, 5}, {91, 7, 13}, {899, 29, 31}});
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].row.term_a == 0);
  CHECK(entries[0].row.term_b == -44100);
  CHECK(entries[0].row.term_c == 12);
  CHECK(entries[0].row.quarter == -11022);
  CHECK(entries[1].row.quarter == -16768962);
  CHECK(entries[2].row.term_b == Coeff("-651736519204"));
  CHECK(entries[2].row.quarter == Coeff("-162934129772"));

  std::string table = format_table1(entries);
  CHECK(table.find("-11022") != std::string::npos);
  CHECK(table.find("-162934129772") != std::string::npos);
  CHECK(table.find("899") != std::string::npos);
}

TEST_CASE("sweeps are reproducible and reports round-trip") {
  SweepConfig cfg = base_config();
  RunReport r1 = run_sweep(cfg, 7);
  RunReport r2 = run_sweep(cfg, 7);
  r2.generated_at = r1.generated_at;
  CHECK(r1 == r2);

  REQUIRE(r1.runs.size() == 2);
  CHECK(r1.runs[0].run_index == 0);
  CHECK(r1.runs[0].param_chain == 450);
  CHECK(r1.runs[0].s == 150);
  CHECK(r1.runs[1].param_chain == 600);
  CHECK(r1.runs[1].s == 200);
  CHECK(r1.runs[0].seed == 7);
  CHECK(r1.runs[1].seed == 7 + 1000003);
  CHECK(r1.summary.total_runs == 2);
  CHECK(r1.master_seed == 7);
  CHECK(r1.format_version == 1);
  CHECK(!r1.generated_at.empty());

  std::string json = emit_report(r1, ReportFormat::Json);
  RunReport parsed = parse_report_json(json);
  CHECK(parsed == r1);
  CHECK(emit_report(parsed, ReportFormat::Json) == json);

  RunReport r3 = run_sweep(cfg, 8);
  bool some_field_differs = false;
  for (std::size_t i = 0; i < r3.runs.size(); ++i) {
    if (r3.runs[i].seed != r1.runs[i].seed) some_field_differs = true;
  }
  CHECK(some_field_differs);

  CHECK_THROWS_AS(parse_report_json("{}"), ParseError);
  CHECK_THROWS_AS(parse_report_json("not json"), ParseError);
}

TEST_CASE("csv report is the pinned flat table") {
  SweepConfig cfg = base_config();
  RunReport r = run_sweep(cfg, 7);
  std::string csv = emit_report(r, ReportFormat::Csv);
  CHECK(csv.rfind("param_chain,s,scale_factor,range_ratio,distinct,valid,best_energy,x,y\n", 0) == 0);
  int lines = 0;
  for (char ch : csv) {
    if (ch == '\n') ++lines;
  }
  CHECK(lines == 3);

  RunReport empty;
  empty.config = cfg;
  empty.generated_at = "2026-01-01T00:00:00Z";
  CHECK(emit_report(empty, ReportFormat::Csv) ==
        "param_chain,s,scale_factor,range_ratio,distinct,valid,best_energy,x,y\n");
  CHECK(parse_report_json(emit_report(empty, ReportFormat::Json)) == empty);
}

TEST_CASE("near-identity sweep recovers the factorization exactly") {
  SweepConfig cfg;
  cfg.spec = ProblemSpec{15, 4, 4, ObjectiveVariant::EQ2};
  cfg.grids = {GridSpec{450, 450, 1}};
  cfg.s_rule = SRuleSpec{SRule::SafeBound, Coeff(0)};
  cfg.hardware.precision_bits = 60;
  cfg.solver = SolverKind::Exact;
  RunReport r = run_sweep(cfg, 123);

  REQUIRE(r.runs.size() == 1);
  const RunRecord& run = r.runs[0];
  CHECK(run.s == 42837241);
  CHECK(run.range_max == 128511723);
  CHECK(run.range_min == 96);
  CHECK(run.range_ratio == doctest::Approx(128511723.0 / 96.0));
  CHECK(run.valid_count == 1);
  CHECK(run.distinct_count == 1);
  CHECK(run.best_x == 3);
  CHECK(run.best_y == 5);
  CHECK(!run.saturated);
  CHECK(run.mean_breaks == 0.0);  // no chains to break at length 1
  CHECK(run.scale_factor == doctest::Approx(1.0 / 128511723.0));
  CHECK(r.summary.any_success);
  CHECK(r.summary.total_valid == 1);
  CHECK(r.summary.first_success_param_chain == 450);
  CHECK(r.summary.first_success_s == 42837241);
}

TEST_CASE("default-precision embedded sweep never factors on the first grid") {
  // The couplings this grid sweeps are six orders of magnitude below the top
  // coefficient, so after 5-bit quantization the chains are simply uncoupled
  // and fall apart, and no sample can be a valid factoring.
  SweepConfig cfg;
  cfg.spec = ProblemSpec{15, 4, 4, ObjectiveVariant::EQ2};
  cfg.grids = {GridSpec{10, 100, 10}};
  cfg.s_rule = SRuleSpec{SRule::ThirdOfParamChain, Coeff(0)};
  cfg.hardware = HardwareModel{};  // 5 bits
  cfg.hardware.chain_length = 2;
  cfg.solver = SolverKind::SA;
  cfg.schedule.sweeps = 1000;
  cfg.samples_per_run = 30;
  RunReport r = run_sweep(cfg, 2026);

  REQUIRE(r.runs.size() == 10);
  double total_breaks = 0.0;
  for (const RunRecord& run : r.runs) {
    CHECK(run.valid_count == 0);
    total_breaks += run.mean_breaks;
  }
  CHECK(total_breaks > 0.0);
  CHECK(!r.summary.any_success);
  CHECK(r.summary.total_valid == 0);
}

TEST_CASE("chain integrity improves with coupling until saturation") {
  ProblemSpec spec{15, 2, 2, ObjectiveVariant::EQ2};
  MultilinearPoly obj = build_objective(spec);
  const Coeff safe = safe_penalty_bound(obj);
  const long long s = static_cast<long long>(safe);

  SweepConfig cfg;
  cfg.spec = spec;
  cfg.grids = {GridSpec{s / 4, (9 * s) / 4, s / 2}};
  cfg.s_rule = SRuleSpec{SRule::Fixed, safe};
  cfg.hardware.precision_bits = 5;
  cfg.hardware.chain_length = 2;
  cfg.hardware.noise_sigma = 0.02;
  cfg.solver = SolverKind::SA;
  cfg.schedule.sweeps = 500;
  cfg.samples_per_run = 150;
  RunReport r = run_sweep(cfg, 99);

  REQUIRE(r.runs.size() == 5);
  CHECK(!r.runs[0].saturated);
  CHECK(!r.runs[1].saturated);
  CHECK(!r.runs[2].saturated);
  CHECK(r.runs[3].saturated);
  CHECK(r.runs[4].saturated);

  // Weak coupling must actually be breaking chains, and stronger coupling
  // must not make integrity worse while the coupling still fits the grid.
  CHECK(r.runs[0].mean_breaks > 0.0);
  CHECK(r.runs[0].mean_breaks >= r.runs[1].mean_breaks);
  CHECK(r.runs[1].mean_breaks >= r.runs[2].mean_breaks);
}

TEST_CASE("reduced-width preset factors undegraded and reports both ranges") {
  Preset3x4Report p15 = run_preset_3x4(15);
  CHECK(p15.spec.x_bits == 3);
  CHECK(p15.spec.y_bits == 4);
  CHECK(p15.penalty_s == 150);
  CHECK(p15.hardware.param_chain == 450);
  CHECK(p15.undegraded_success);
  CHECK(p15.undegraded.best_energy == -11022);
  REQUIRE(!p15.undegraded.samples.empty());
  CHECK(p15.undegraded.samples[0].x == 3);
  CHECK(p15.undegraded.samples[0].y == 5);
  CHECK(p15.range_reduced.ratio < p15.range_full.ratio);
  CHECK(p15.scale_factor > 0.0);

  Preset3x4Report p35 = run_preset_3x4(35);
  CHECK(p35.undegraded_success);
  CHECK(p35.undegraded.samples[0].x == 5);
  CHECK(p35.undegraded.samples[0].y == 7);
  CHECK(p35.range_reduced.ratio < p35.range_full.ratio);

  std::string text = format_preset_3x4(p15);
  CHECK(text.find("15") != std::string::npos);
  CHECK(!text.empty());
}
