#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cntpuf/errors.hpp"
#include "cntpuf/scenario.hpp"
#include "cntpuf/trace_io.hpp"

using namespace cntpuf;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "cntpuf-io-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

Scenario random_scenario(Rng& rng) {
  Scenario s;
  s.n_rows = 1 + static_cast<int>(rng.next_u64() % 16);
  s.n_cols = 1 + static_cast<int>(rng.next_u64() % 16);
  s.seed = rng.next_u64();
  s.v_drive = rng.next_uniform(0.1, 1.5);
  s.v_gate_on = rng.next_uniform(1.5, 3.0);
  s.repetitions = 1 + static_cast<int>(rng.next_u64() % 20);
  s.readout_repetitions = 1 + static_cast<int>(rng.next_u64() % 5);
  s.enrollment_reads = 2 + static_cast<int>(rng.next_u64() % 10);
  s.mix.noise_sigma = rng.next_uniform(0.0, 0.5);
  s.mix.p_metallic = 0.0;
  s.mix.p_semiconducting = rng.next_uniform(0.2, 0.8);
  s.mix.p_insulating = 1.0 - s.mix.p_semiconducting;
  s.mix.v_th = {rng.next_uniform(0.2, 0.8), rng.next_uniform(0.9, 2.0)};
  s.probe_access.drain_lines = rng.next_double() < 0.5;
  s.probe_access.source_lines = rng.next_double() < 0.5;
  s.probe_access.gate_line = true;
  return s;
}

bool same_scenario(const Scenario& a, const Scenario& b) {
  return serialize_scenario(a) == serialize_scenario(b);
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  const Scenario s = parse_scenario(R"({"n_rows": 12, "n_cols": 12, "seed": 7})");
  CHECK(s.seed == 7);
  CHECK(s.v_drive == 0.5);
  CHECK(s.v_gate_on == 2.0);
  CHECK(s.repetitions == 10);
  CHECK(s.readout_repetitions == 1);
  CHECK(s.enrollment_reads == 10);
  CHECK(s.mix.noise_sigma == 0.1);
  CHECK(s.mix.p_metallic == 0.0);
  CHECK(s.mix.p_semiconducting == 0.5);
  CHECK(s.mix.p_insulating == 0.5);
  CHECK(s.mix.semiconducting.g_on.lo == 1e-7);
  CHECK(s.mix.semiconducting.g_on.hi == 1e-5);
  CHECK(s.mix.insulating.g_off.lo == 1e-13);
  CHECK(s.mix.insulating.g_off.hi == 4e-12);
  CHECK(s.probe_access.drain_lines);
  CHECK(s.probe_access.source_lines);
  CHECK(s.probe_access.gate_line);
}

TEST_CASE("probability sum violations name the field") {
  const std::string text =
      R"({"mix": {"p_metallic": 0.0, "p_semiconducting": 0.4, "p_insulating": 0.5}})";
  try {
    parse_scenario(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("probabilities") != std::string::npos);
  }
}

TEST_CASE("unknown keys are rejected with their path") {
  try {
    parse_scenario(R"({"mix": {"p_metalic": 0.5}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("mix.p_metalic") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario(R"({"rows": 12})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("not json"), ConfigError);
}

TEST_CASE("range and value violations are rejected") {
  CHECK_THROWS_AS(parse_scenario(R"({"n_rows": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"v_drive": 0.0})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"repetitions": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"enrollment_reads": 1})"), ConfigError);
  CHECK_THROWS_AS(
      parse_scenario(R"({"mix": {"semiconducting": {"g_off": [1e-9, 1e-10]}}})"),
      ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"probe_access": ["drains"]})"), ConfigError);
}

TEST_CASE("scenarios round-trip through serialization") {
  Rng rng(401);
  for (int trial = 0; trial < 50; ++trial) {
    const Scenario original = random_scenario(rng);
    const Scenario parsed = parse_scenario(serialize_scenario(original));
    CHECK(same_scenario(original, parsed));
    CHECK(scenario_hash(original) == scenario_hash(parsed));
  }
}

TEST_CASE("scenario hash ignores formatting but tracks semantic changes") {
  const Scenario base = parse_scenario(R"({"seed": 5, "noise_sigma": 0.1})");
  const Scenario reformatted = parse_scenario(
      "{\n\t\"noise_sigma\": 0.1,   \"seed\": 5\n}\n");
  CHECK(scenario_hash(base) == scenario_hash(reformatted));

  Scenario changed = base;
  changed.mix.noise_sigma = 0.2;
  CHECK(scenario_hash(base) != scenario_hash(changed));
  changed = base;
  changed.seed = 6;
  CHECK(scenario_hash(base) != scenario_hash(changed));
  changed = base;
  changed.probe_access.drain_lines = false;
  CHECK(scenario_hash(base) != scenario_hash(changed));
}

TEST_CASE("probe access gates the attack schemes") {
  Scenario scenario;

  SUBCASE("gate-only access blocks the drain-leak attack") {
    scenario.probe_access = {false, false, true};
    const BiasScheme s = make_bias_scheme(SchemeKind::DrainLeak, 0, 0, 12, 12);
    const AccessCheck check = check_probe_access(scenario, s);
    CHECK(!check.permitted);
    CHECK(check.blocked_reason.find("drain-lines") != std::string::npos);
  }

  SUBCASE("full access permits every scheme") {
    for (SchemeKind kind : kAttackKinds) {
      const BiasScheme s = make_bias_scheme(kind, 3, 4, 12, 12);
      CHECK(check_probe_access(scenario, s).permitted);
    }
  }

  SUBCASE("gate-leak needs the drain lines driven, so it is blocked without them") {
    scenario.probe_access = {false, true, true};
    const BiasScheme s = make_bias_scheme(SchemeKind::GateLeak, 0, 0, 12, 12);
    CHECK(!check_probe_access(scenario, s).permitted);
  }

  SUBCASE("source and gate access suffice for nonsel-leak-othersgnd measurement lines") {
    // The scheme still drives the selected drain line, so it stays blocked.
    scenario.probe_access = {false, true, true};
    const BiasScheme s = make_bias_scheme(SchemeKind::NonSelLeakOthersGnd, 0, 0, 12, 12);
    const AccessCheck check = check_probe_access(scenario, s);
    CHECK(!check.permitted);
  }
}

TEST_CASE("traces round-trip exactly through the delimited file") {
  Scenario scenario;
  scenario.n_rows = scenario.n_cols = 4;
  scenario.seed = 99;
  const Crossbar xbar = scenario.build();
  const AttackTrace trace =
      run_attack_trace(xbar, SchemeKind::DrainLeak, scenario.measure_params(), 3,
                       scenario.attack_seed(SchemeKind::DrainLeak));

  CHECK_THROWS_AS(write_trace(trace, scenario, "/nonexistent/dir/trace.tsv"), IoError);

  const auto path = temp_file("trace_roundtrip.tsv");
  write_trace(trace, scenario, path.string());
  const StoredTrace stored = read_trace(path.string());

  CHECK(stored.format_version == kTraceFormatVersion);
  CHECK(stored.scenario_hash == scenario_hash(scenario));
  CHECK(stored.seed == scenario.seed);
  CHECK(stored.trace.kind == trace.kind);
  CHECK(stored.trace.truth == trace.truth);
  REQUIRE(stored.trace.samples.size() == trace.samples.size());
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    REQUIRE(stored.trace.samples[i].size() == trace.samples[i].size());
    for (std::size_t k = 0; k < trace.samples[i].size(); ++k) {
      CHECK(stored.trace.samples[i][k].reading == trace.samples[i][k].reading);
      CHECK(stored.trace.samples[i][k].noise_seed == trace.samples[i][k].noise_seed);
      CHECK(stored.trace.samples[i][k].cell == trace.samples[i][k].cell);
    }
  }
}

TEST_CASE("trace files have one row per sample plus the header") {
  Scenario scenario;
  scenario.seed = 17;
  const Crossbar xbar = scenario.build();
  const AttackTrace trace =
      run_attack_trace(xbar, SchemeKind::GateLeak, scenario.measure_params(), 10,
                       scenario.attack_seed(SchemeKind::GateLeak));
  const auto path = temp_file("trace_rows.tsv");
  write_trace(trace, scenario, path.string());

  const std::string content = slurp(path);
  std::size_t data_rows = 0, header_rows = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const std::size_t eol = content.find('\n', pos);
    const std::string line = content.substr(pos, eol - pos);
    if (!line.empty() && line[0] == '#')
      ++header_rows;
    else if (!line.empty() && line.find("row\t") != 0)
      ++data_rows;
    pos = eol + 1;
  }
  CHECK(data_rows == 1440);
  CHECK(header_rows == 8);
}

TEST_CASE("re-exporting the same run is byte-identical") {
  Scenario scenario;
  scenario.n_rows = scenario.n_cols = 3;
  const Crossbar xbar = scenario.build();
  const AttackTrace trace =
      run_attack_trace(xbar, SchemeKind::NonSelLeak, scenario.measure_params(), 2,
                       scenario.attack_seed(SchemeKind::NonSelLeak));
  const auto path_a = temp_file("trace_a.tsv");
  const auto path_b = temp_file("trace_b.tsv");
  write_trace(trace, scenario, path_a.string());
  write_trace(trace, scenario, path_b.string());
  CHECK(slurp(path_a) == slurp(path_b));
}

TEST_CASE("reports and responses round-trip through JSON files") {
  Scenario scenario;
  scenario.n_rows = scenario.n_cols = 4;
  const Crossbar xbar = scenario.build();
  const Response legit =
      read_response(xbar, scenario.threshold_rule(), scenario.measure_params(), 1,
                    scenario.readout_seed(0));
  const AttackTrace trace =
      run_attack_trace(xbar, SchemeKind::DrainLeak, scenario.measure_params(), 5,
                       scenario.attack_seed(SchemeKind::DrainLeak));
  const AttackReport report = build_attack_report(trace, legit);

  const auto report_path = temp_file("report.json");
  write_attack_report(report, scenario, report_path.string());
  CHECK(slurp(report_path).find("drain-leak") != std::string::npos);

  const auto response_path = temp_file("response.json");
  write_response_file(legit, compute_metrics(legit, {}), scenario,
                      response_path.string());
  const StoredResponse stored = read_response_file(response_path.string());
  CHECK(stored.response.bits == legit.bits);
  CHECK(stored.response.mask == legit.mask);
  CHECK(stored.scenario_hash == scenario_hash(scenario));
}

TEST_CASE("crossbar files preserve every cell parameter") {
  Scenario scenario;
  scenario.n_rows = 5;
  scenario.n_cols = 3;
  const Crossbar xbar = scenario.build();
  const auto path = temp_file("crossbar.json");
  write_crossbar_file(xbar, scenario, path.string());
  const Crossbar loaded = read_crossbar_file(path.string());

  REQUIRE(loaded.cell_count() == xbar.cell_count());
  for (std::size_t i = 0; i < xbar.cells.size(); ++i) {
    CHECK(loaded.cells[i].cell_class == xbar.cells[i].cell_class);
    CHECK(loaded.cells[i].g_on == xbar.cells[i].g_on);
    CHECK(loaded.cells[i].g_off == xbar.cells[i].g_off);
    CHECK(loaded.cells[i].g_gate == xbar.cells[i].g_gate);
    CHECK(loaded.cells[i].v_th == xbar.cells[i].v_th);
    CHECK(loaded.cells[i].noise_sigma == xbar.cells[i].noise_sigma);
  }
}

TEST_CASE("doubles survive the text round-trip bit-exactly") {
  Rng rng(409);
  for (int i = 0; i < 2000; ++i) {
    const double value = (rng.next_double() - 0.5) * rng.next_log_uniform(1e-15, 1e-3);
    CHECK(parse_double(format_double(value)) == value);
  }
  CHECK(parse_double(format_double(0.0)) == 0.0);
  CHECK_THROWS_AS(parse_double("1.2garbage"), IoError);
}

TEST_CASE("missing files raise IoError with the path") {
  try {
    load_scenario("/nonexistent/scenario.json");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/scenario.json") != std::string::npos);
  }
  CHECK_THROWS_AS(read_trace("/nonexistent/trace.tsv"), IoError);
  CHECK_THROWS_AS(read_response_file("/nonexistent/resp.json"), IoError);
}
