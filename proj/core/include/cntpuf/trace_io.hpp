#pragma once

#include <string>
#include <vector>

#include "cntpuf/analysis.hpp"
#include "cntpuf/scenario.hpp"

namespace cntpuf {

inline constexpr int kTraceFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;
inline constexpr int kResponseFormatVersion = 1;
inline constexpr int kCrossbarFormatVersion = 1;

// Formats a double with the shortest representation that parses back to the
// same value, so files round-trip exactly and are byte-stable across runs.
std::string format_double(double value);
double parse_double(const std::string& text);

// Trace files are tab-delimited text: a commented header carrying the
// format version, scenario hash, master seed, kind, dimensions and ground
// truth, then one row per sample (row, col, kind, repetition, reading in
// amperes, noise seed or "-").
void write_trace(const AttackTrace& trace, const Scenario& scenario,
                 const std::string& path);

struct StoredTrace {
  AttackTrace trace;
  int format_version = 0;
  std::string scenario_hash;
  std::uint64_t seed = 0;
};

StoredTrace read_trace(const std::string& path);

// Reports and responses are JSON records with the same versioned header
// fields embedded.
void write_attack_report(const AttackReport& report, const Scenario& scenario,
                         const std::string& path);

void write_response_file(const Response& response, const MetricsReport& metrics,
                         const Scenario& scenario, const std::string& path);

struct StoredResponse {
  Response response;
  int format_version = 0;
  std::string scenario_hash;
  std::uint64_t seed = 0;
};

StoredResponse read_response_file(const std::string& path);

// Full device dump: every cell's model parameters, for inspection and for
// feeding external tooling.
void write_crossbar_file(const Crossbar& crossbar, const Scenario& scenario,
                         const std::string& path);

Crossbar read_crossbar_file(const std::string& path);

}  // namespace cntpuf
