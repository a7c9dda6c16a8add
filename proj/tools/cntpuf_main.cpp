// Command-line front end: builds crossbars from scenario configs, runs the
// legitimate readout and the probing attacks, and emits plot-ready data.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cntpuf/analysis.hpp"
#include "cntpuf/errors.hpp"
#include "cntpuf/scenario.hpp"
#include "cntpuf/trace_io.hpp"

namespace {

using namespace cntpuf;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
};

// Config resolution order: --config flag, then the CNTPUF_CONFIG environment
// variable, then the built-in defaults (12x12, documented default mix).
Scenario resolve_scenario(const CommonOptions& opts) {
  Scenario scenario;
  if (!opts.config_path.empty()) {
    scenario = load_scenario(opts.config_path);
  } else if (const char* env = std::getenv("CNTPUF_CONFIG"); env && *env) {
    scenario = load_scenario(env);
  }
  if (opts.seed_override) scenario.seed = *opts.seed_override;
  scenario.validate();
  return scenario;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path,
                  "Scenario config file (default: $CNTPUF_CONFIG, else built-in defaults)");
  cmd->add_option("--seed", opts.seed_override, "Override the scenario master seed");
}

Response legitimate_response(const Crossbar& crossbar, const Scenario& scenario) {
  return read_response(crossbar, scenario.threshold_rule(), scenario.measure_params(),
                       scenario.readout_repetitions, scenario.readout_seed(0));
}

Response response_from_file_checked(const std::string& path, const Scenario& scenario) {
  const StoredResponse stored = read_response_file(path);
  if (stored.scenario_hash != scenario_hash(scenario))
    throw ConfigError(path + ": response belongs to a different scenario (hash " +
                      stored.scenario_hash + " != " + scenario_hash(scenario) + ")");
  return stored.response;
}

void print_report_summary(const AttackReport& report) {
  std::cout << "kind " << to_string(report.kind)
            << "  separable " << (report.learned.separable ? "yes" : "no")
            << "  threshold_a " << format_double(report.learned.rule.threshold)
            << "\naccuracy_vs_truth " << report.accuracy_vs_truth
            << "  accuracy_vs_response " << report.accuracy_vs_response
            << "  distinguishability " << report.distinguishability << "\n";
}

int run_generate(const CommonOptions& opts, const std::string& out_path) {
  const Scenario scenario = resolve_scenario(opts);
  write_crossbar_file(scenario.build(), scenario, out_path);
  std::cout << "crossbar " << scenario.n_rows << "x" << scenario.n_cols
            << " seed " << scenario.seed << " -> " << out_path << "\n";
  return 0;
}

int run_readout(const CommonOptions& opts, int enroll_reads, int rereads,
                const std::string& out_path) {
  const Scenario scenario = resolve_scenario(opts);
  const Crossbar crossbar = scenario.build();
  const ThresholdRule rule = scenario.threshold_rule();
  const MeasureParams params = scenario.measure_params();

  const Response reference =
      enroll_reads > 0
          ? enroll_mask(crossbar, rule, params, enroll_reads,
                        scenario.readout_repetitions, scenario.enroll_seed())
          : read_response(crossbar, rule, params, scenario.readout_repetitions,
                          scenario.readout_seed(0));

  std::vector<Response> reread_list;
  for (int k = 0; k < rereads; ++k)
    reread_list.push_back(read_response(crossbar, rule, params,
                                        scenario.readout_repetitions,
                                        scenario.readout_seed(1 + k)));

  const MetricsReport metrics = compute_metrics(reference, reread_list);
  write_response_file(reference, metrics, scenario, out_path);

  int masked = 0;
  for (std::uint8_t m : reference.mask) masked += m == 0;
  std::cout << "response " << reference.length() << " bits, " << masked
            << " masked, hamming weight " << metrics.hamming_weight
            << ", mean intra-HD " << metrics.mean_intra_hd() << " -> " << out_path
            << "\n";
  return 0;
}

int run_attack(const CommonOptions& opts, const std::string& kind_name,
               const std::string& trace_path, const std::string& report_path,
               const std::string& response_path) {
  const Scenario scenario = resolve_scenario(opts);
  const auto kind = scheme_kind_from_string(kind_name);
  if (!kind || !is_attack_kind(*kind))
    throw ConfigError("unknown attack kind '" + kind_name + "'");

  const BiasScheme probe = make_bias_scheme(*kind, 0, 0, scenario.n_rows,
                                            scenario.n_cols, scenario.v_drive,
                                            scenario.v_gate_on);
  const AccessCheck access = check_probe_access(scenario, probe);
  if (!access.permitted)
    throw ConfigError("attack blocked by countermeasure: " + access.blocked_reason);

  const Crossbar crossbar = scenario.build();
  const AttackTrace trace =
      run_attack_trace(crossbar, *kind, scenario.measure_params(),
                       scenario.repetitions, scenario.attack_seed(*kind));
  const Response legit = response_path.empty()
                             ? legitimate_response(crossbar, scenario)
                             : response_from_file_checked(response_path, scenario);
  const AttackReport report = build_attack_report(trace, legit);

  if (!trace_path.empty()) write_trace(trace, scenario, trace_path);
  if (!report_path.empty()) write_attack_report(report, scenario, report_path);
  print_report_summary(report);
  return 0;
}

int run_analyze(const CommonOptions& opts, const std::string& trace_path,
                const std::string& response_path, const std::string& report_path) {
  const Scenario scenario = resolve_scenario(opts);
  const StoredTrace stored = read_trace(trace_path);
  if (stored.scenario_hash != scenario_hash(scenario))
    throw ConfigError(trace_path + ": trace belongs to a different scenario (hash " +
                      stored.scenario_hash + " != " + scenario_hash(scenario) + ")");

  const Response legit =
      response_path.empty()
          ? legitimate_response(scenario.build(), scenario)
          : response_from_file_checked(response_path, scenario);
  const AttackReport report = build_attack_report(stored.trace, legit);

  if (!report_path.empty()) write_attack_report(report, scenario, report_path);
  print_report_summary(report);
  return 0;
}

// Default figure-style selection: the first two logical-1 and the first two
// logical-0 cells of the trace.
std::vector<CellRef> default_series_cells(const AttackTrace& trace) {
  std::vector<CellRef> cells;
  for (int wanted : {1, 0}) {
    int found = 0;
    for (int i = 0; i < trace.cell_count() && found < 2; ++i) {
      if (trace.truth[static_cast<std::size_t>(i)] == wanted) {
        cells.push_back({i / trace.n_cols, i % trace.n_cols});
        ++found;
      }
    }
  }
  return cells;
}

std::vector<CellRef> parse_cell_list(const std::string& text, const AttackTrace& trace) {
  std::vector<CellRef> cells;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(start, end - start);
    const std::size_t comma = item.find(',');
    if (comma == std::string::npos)
      throw ConfigError("--cells expects 'row,col;row,col;...' (got '" + item + "')");
    CellRef cell{std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1))};
    if (cell.row < 0 || cell.row >= trace.n_rows || cell.col < 0 ||
        cell.col >= trace.n_cols)
      throw ConfigError("--cells: cell outside the trace grid");
    cells.push_back(cell);
    start = end + 1;
  }
  if (cells.empty()) throw ConfigError("--cells: empty cell list");
  return cells;
}

int run_report(const std::string& trace_path, const std::string& cells_text,
               const std::string& response_path, const std::string& out_path) {
  const StoredTrace stored = read_trace(trace_path);
  const AttackTrace& trace = stored.trace;
  const std::vector<CellRef> cells = cells_text.empty()
                                         ? default_series_cells(trace)
                                         : parse_cell_list(cells_text, trace);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + out_path);
  out << "# cntpuf-series " << kTraceFormatVersion << "\n";
  out << "# scenario " << stored.scenario_hash << "\n";
  out << "# kind " << to_string(trace.kind) << "\n";
  out << "cell_id\trow\tcol\ttruth\trep\treading_a\n";
  for (const CellRef& cell : cells) {
    const int index = cell.row * trace.n_cols + cell.col;
    for (const MeasurementSample& s : trace.samples[static_cast<std::size_t>(index)])
      out << index << "\t" << cell.row << "\t" << cell.col << "\t"
          << int(trace.truth[static_cast<std::size_t>(index)]) << "\t"
          << s.repetition << "\t" << format_double(s.reading) << "\n";
  }
  if (!out) throw IoError("write failed: " + out_path);

  // Summary table over the whole trace.
  const std::vector<double> means = cell_mean_magnitudes(trace);
  const LearnedRule learned = learn_threshold(means);
  std::vector<double> group_one, group_zero;
  for (std::size_t i = 0; i < means.size(); ++i)
    (trace.truth[i] ? group_one : group_zero).push_back(means[i]);

  std::cout << "kind\tseparable\tthreshold_a\taccuracy_vs_truth";
  if (!response_path.empty()) std::cout << "\taccuracy_vs_response";
  std::cout << "\tdistinguishability\n";
  std::cout << to_string(trace.kind) << "\t" << (learned.separable ? "yes" : "no")
            << "\t" << format_double(learned.rule.threshold) << "\t"
            << attack_accuracy(trace, learned.rule, trace.truth);
  if (!response_path.empty()) {
    const StoredResponse stored_response = read_response_file(response_path);
    std::cout << "\t" << attack_accuracy(trace, learned.rule,
                                         stored_response.response.bits);
  }
  const double dist = (group_one.empty() || group_zero.empty())
                          ? 0.5
                          : distinguishability(group_one, group_zero);
  std::cout << "\t" << dist << "\n";
  std::cout << "series " << cells.size() << " cells x " << trace.repetitions
            << " repetitions -> " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CNT-FET crossbar PUF simulator and probing-attack evaluator"};
  app.require_subcommand(1);

  CommonOptions generate_opts, readout_opts, enroll_opts, attack_opts, analyze_opts;

  auto* generate = app.add_subcommand("generate", "Build and persist a crossbar");
  add_common(generate, generate_opts);
  std::string generate_out;
  generate->add_option("--out", generate_out, "Crossbar output file")->required();

  auto* readout = app.add_subcommand("readout", "Legitimate response readout");
  add_common(readout, readout_opts);
  int readout_enroll_reads = 0, readout_rereads = 10;
  std::string readout_out;
  readout->add_option("--enroll-reads", readout_enroll_reads,
                      "Enable enrollment masking with this many reads");
  readout->add_option("--rereads", readout_rereads,
                      "Re-reads used for reliability metrics (default 10)");
  readout->add_option("--out", readout_out, "Response output file")->required();

  auto* enroll = app.add_subcommand("enroll", "Enrollment readout with stability masking");
  add_common(enroll, enroll_opts);
  int enroll_reads = 0, enroll_rereads = 10;
  std::string enroll_out;
  enroll->add_option("--reads", enroll_reads,
                     "Enrollment reads (default: scenario enrollment_reads)");
  enroll->add_option("--rereads", enroll_rereads,
                     "Re-reads used for reliability metrics (default 10)");
  enroll->add_option("--out", enroll_out, "Response output file")->required();

  auto* attack = app.add_subcommand("attack", "Run one probing attack");
  add_common(attack, attack_opts);
  std::string attack_kind, attack_trace_out, attack_report_out, attack_response;
  attack->add_option("--kind", attack_kind,
                     "gate-leak, gate-leak-alt, nonsel-leak, nonsel-leak-selgnd, "
                     "nonsel-leak-othersgnd or drain-leak")
      ->required();
  attack->add_option("--trace-out", attack_trace_out, "Trace output file");
  attack->add_option("--report-out", attack_report_out, "Report output file");
  attack->add_option("--response", attack_response,
                     "Score against this stored response instead of a fresh readout");

  auto* analyze = app.add_subcommand("analyze", "Recompute a report from a stored trace");
  add_common(analyze, analyze_opts);
  std::string analyze_trace, analyze_response, analyze_report_out;
  analyze->add_option("--trace", analyze_trace, "Stored trace file")->required();
  analyze->add_option("--response", analyze_response, "Stored response file");
  analyze->add_option("--report-out", analyze_report_out, "Report output file");

  auto* report = app.add_subcommand("report", "Emit plot-ready per-cell sample series");
  std::string report_trace, report_cells, report_response, report_out;
  report->add_option("--trace", report_trace, "Stored trace file")->required();
  report->add_option("--cells", report_cells,
                     "Cells as 'row,col;row,col;...' (default: two per class)");
  report->add_option("--response", report_response,
                     "Stored response file for response-relative accuracy");
  report->add_option("--out", report_out, "Series output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return run_generate(generate_opts, generate_out);
    if (readout->parsed())
      return run_readout(readout_opts, readout_enroll_reads, readout_rereads, readout_out);
    if (enroll->parsed()) {
      const int reads =
          enroll_reads > 0 ? enroll_reads : resolve_scenario(enroll_opts).enrollment_reads;
      return run_readout(enroll_opts, reads, enroll_rereads, enroll_out);
    }
    if (attack->parsed())
      return run_attack(attack_opts, attack_kind, attack_trace_out, attack_report_out,
                        attack_response);
    if (analyze->parsed())
      return run_analyze(analyze_opts, analyze_trace, analyze_response, analyze_report_out);
    if (report->parsed())
      return run_report(report_trace, report_cells, report_response, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
