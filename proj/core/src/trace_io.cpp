#include "cntpuf/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "cntpuf/errors.hpp"

namespace cntpuf {

using nlohmann::json;

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
    throw IoError("malformed number: '" + text + "'");
  return value;
}

namespace {

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string out;
  out.reserve(bits.size());
  for (std::uint8_t b : bits) out.push_back(b ? '1' : '0');
  return out;
}

std::vector<std::uint8_t> bits_from_string(const std::string& text,
                                           const std::string& what) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw IoError(what + ": malformed bit string");
    bits.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return bits;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
  if (!out) throw IoError("cannot write file: " + path);
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

json report_header(const Scenario& scenario, int version) {
  return json{{"format_version", version},
              {"scenario_hash", scenario_hash(scenario)},
              {"seed", scenario.seed}};
}

void dump_json(const json& root, const std::string& path) {
  auto out = open_out(path);
  out << root.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace

void write_trace(const AttackTrace& trace, const Scenario& scenario,
                 const std::string& path) {
  auto out = open_out(path);
  out << "# cntpuf-trace " << kTraceFormatVersion << "\n";
  out << "# scenario " << scenario_hash(scenario) << "\n";
  out << "# seed " << scenario.seed << "\n";
  out << "# kind " << to_string(trace.kind) << "\n";
  out << "# rows " << trace.n_rows << "\n";
  out << "# cols " << trace.n_cols << "\n";
  out << "# repetitions " << trace.repetitions << "\n";
  out << "# truth " << bits_to_string(trace.truth) << "\n";
  out << "row\tcol\tkind\trep\treading_a\tnoise_seed\n";
  for (const auto& cell_samples : trace.samples) {
    for (const MeasurementSample& s : cell_samples) {
      out << s.cell.row << "\t" << s.cell.col << "\t" << to_string(s.kind) << "\t"
          << s.repetition << "\t" << format_double(s.reading) << "\t";
      if (s.noise_seed)
        out << *s.noise_seed;
      else
        out << "-";
      out << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

StoredTrace read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read file: " + path);

  StoredTrace stored;
  AttackTrace& trace = stored.trace;
  std::string line;
  bool saw_column_header = false;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string key;
      header >> key;
      if (key == "cntpuf-trace") {
        header >> stored.format_version;
      } else if (key == "scenario") {
        header >> stored.scenario_hash;
      } else if (key == "seed") {
        header >> stored.seed;
      } else if (key == "kind") {
        std::string name;
        header >> name;
        const auto kind = scheme_kind_from_string(name);
        if (!kind) throw IoError(path + ": unknown scheme kind '" + name + "'");
        trace.kind = *kind;
      } else if (key == "rows") {
        header >> trace.n_rows;
      } else if (key == "cols") {
        header >> trace.n_cols;
      } else if (key == "repetitions") {
        header >> trace.repetitions;
      } else if (key == "truth") {
        std::string bits;
        header >> bits;
        trace.truth = bits_from_string(bits, path);
      }
      continue;
    }
    if (!saw_column_header) {  // column title row
      saw_column_header = true;
      continue;
    }

    const auto fields = split_tabs(line);
    if (fields.size() != 6) throw IoError(path + ": malformed sample row");
    MeasurementSample sample;
    try {
      sample.cell.row = std::stoi(fields[0]);
      sample.cell.col = std::stoi(fields[1]);
      sample.repetition = std::stoi(fields[3]);
      sample.reading = parse_double(fields[4]);
      if (fields[5] != "-") sample.noise_seed = std::stoull(fields[5]);
    } catch (const std::logic_error&) {
      throw IoError(path + ": malformed sample row '" + line + "'");
    }
    const auto kind = scheme_kind_from_string(fields[2]);
    if (!kind) throw IoError(path + ": unknown scheme kind '" + fields[2] + "'");
    sample.kind = *kind;

    const int index = sample.cell.row * trace.n_cols + sample.cell.col;
    if (index < 0 || trace.n_cols <= 0)
      throw IoError(path + ": sample before dimension header");
    if (static_cast<int>(trace.samples.size()) <= index)
      trace.samples.resize(static_cast<std::size_t>(index) + 1);
    trace.samples[static_cast<std::size_t>(index)].push_back(sample);
  }

  if (stored.format_version != kTraceFormatVersion)
    throw IoError(path + ": unsupported trace format version");
  if (static_cast<int>(trace.samples.size()) != trace.cell_count() ||
      static_cast<int>(trace.truth.size()) != trace.cell_count())
    throw IoError(path + ": trace does not cover every cell");
  for (const auto& cell_samples : trace.samples)
    if (static_cast<int>(cell_samples.size()) != trace.repetitions)
      throw IoError(path + ": unequal repetitions per cell");
  return stored;
}

void write_attack_report(const AttackReport& report, const Scenario& scenario,
                         const std::string& path) {
  json root = report_header(scenario, kReportFormatVersion);
  root["kind"] = to_string(report.kind);
  root["separable"] = report.learned.separable;
  root["threshold_a"] = report.learned.rule.threshold;
  root["above_is_one"] = report.learned.rule.above_is_one;
  root["centroid_lo_a"] = report.learned.centroid_lo;
  root["centroid_hi_a"] = report.learned.centroid_hi;
  root["predicted_bits"] = bits_to_string(report.predicted);
  root["accuracy_vs_truth"] = report.accuracy_vs_truth;
  root["accuracy_vs_response"] = report.accuracy_vs_response;
  root["distinguishability"] = report.distinguishability;
  dump_json(root, path);
}

void write_response_file(const Response& response, const MetricsReport& metrics,
                         const Scenario& scenario, const std::string& path) {
  json root = report_header(scenario, kResponseFormatVersion);
  root["n_rows"] = scenario.n_rows;
  root["n_cols"] = scenario.n_cols;
  root["bits"] = bits_to_string(response.bits);
  root["mask"] = bits_to_string(response.mask);
  root["metrics"] = {
      {"hamming_weight_fraction", metrics.hamming_weight},
      {"mean_bit_entropy", metrics.mean_bit_entropy()},
      {"mean_intra_hd", metrics.mean_intra_hd()},
      {"intra_hd", metrics.intra_hd},
      {"inter_hd", metrics.inter_hd},
  };
  dump_json(root, path);
}

StoredResponse read_response_file(const std::string& path) {
  const json root = load_json(path);
  StoredResponse stored;
  try {
    stored.format_version = root.at("format_version").get<int>();
    stored.scenario_hash = root.at("scenario_hash").get<std::string>();
    stored.seed = root.at("seed").get<std::uint64_t>();
    stored.response.bits = bits_from_string(root.at("bits").get<std::string>(), path);
    stored.response.mask = bits_from_string(root.at("mask").get<std::string>(), path);
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  if (stored.format_version != kResponseFormatVersion)
    throw IoError(path + ": unsupported response format version");
  if (stored.response.bits.size() != stored.response.mask.size())
    throw IoError(path + ": bits and mask lengths differ");
  return stored;
}

void write_crossbar_file(const Crossbar& crossbar, const Scenario& scenario,
                         const std::string& path) {
  json cells = json::array();
  for (int r = 0; r < crossbar.n_rows; ++r) {
    for (int c = 0; c < crossbar.n_cols; ++c) {
      const CellModel& cell = crossbar.at(r, c);
      cells.push_back({{"row", r},
                       {"col", c},
                       {"class", to_string(cell.cell_class)},
                       {"g_on", cell.g_on},
                       {"g_off", cell.g_off},
                       {"g_gate", cell.g_gate},
                       {"v_th", cell.v_th},
                       {"noise_sigma", cell.noise_sigma}});
    }
  }
  json root = report_header(scenario, kCrossbarFormatVersion);
  root["n_rows"] = crossbar.n_rows;
  root["n_cols"] = crossbar.n_cols;
  root["cells"] = std::move(cells);
  dump_json(root, path);
}

Crossbar read_crossbar_file(const std::string& path) {
  const json root = load_json(path);
  Crossbar crossbar;
  try {
    if (root.at("format_version").get<int>() != kCrossbarFormatVersion)
      throw IoError(path + ": unsupported crossbar format version");
    crossbar.n_rows = root.at("n_rows").get<int>();
    crossbar.n_cols = root.at("n_cols").get<int>();
    crossbar.cells.resize(static_cast<std::size_t>(crossbar.cell_count()));
    for (const json& entry : root.at("cells")) {
      const int r = entry.at("row").get<int>();
      const int c = entry.at("col").get<int>();
      if (r < 0 || r >= crossbar.n_rows || c < 0 || c >= crossbar.n_cols)
        throw IoError(path + ": cell outside grid");
      CellModel& cell = crossbar.at(r, c);
      const auto cls = cell_class_from_string(entry.at("class").get<std::string>());
      if (!cls) throw IoError(path + ": unknown cell class");
      cell.cell_class = *cls;
      cell.g_on = entry.at("g_on").get<double>();
      cell.g_off = entry.at("g_off").get<double>();
      cell.g_gate = entry.at("g_gate").get<double>();
      cell.v_th = entry.at("v_th").get<double>();
      cell.noise_sigma = entry.at("noise_sigma").get<double>();
    }
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return crossbar;
}

}  // namespace cntpuf
