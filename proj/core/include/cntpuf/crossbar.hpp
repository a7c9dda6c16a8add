#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cntpuf/device_model.hpp"

namespace cntpuf {

// Fixed wiring convention used throughout: row r shares drain line r,
// column c shares source line c, and one global gate line drives every
// gate. All bias schemes below are defined against this convention.
struct Crossbar {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<CellModel> cells;  // row-major

  int index(int r, int c) const noexcept { return r * n_cols + c; }
  int cell_count() const noexcept { return n_rows * n_cols; }
  const CellModel& at(int r, int c) const { return cells[index(r, c)]; }
  CellModel& at(int r, int c) { return cells[index(r, c)]; }
};

// Deterministic build. Cell (r, c) is seeded with
// derive_seed(derive_seed(seed, r), c), so any sub-grid can be re-derived
// without sampling the rest of the array.
Crossbar build_crossbar(const ClassMix& mix, int n_rows, int n_cols,
                        std::uint64_t seed);

// Measurement configurations: the regular readout plus the six probing
// layouts. GateLeakAlt is the gate-leak variant with every source line
// grounded; the NonSelLeak variants differ in which lines are grounded.
enum class SchemeKind {
  Regular,
  GateLeak,
  GateLeakAlt,
  NonSelLeak,
  NonSelLeakSelGnd,
  NonSelLeakOthersGnd,
  DrainLeak,
};

inline constexpr SchemeKind kAttackKinds[] = {
    SchemeKind::GateLeak,         SchemeKind::GateLeakAlt,
    SchemeKind::NonSelLeak,       SchemeKind::NonSelLeakSelGnd,
    SchemeKind::NonSelLeakOthersGnd, SchemeKind::DrainLeak,
};

bool is_attack_kind(SchemeKind kind) noexcept;
std::string_view to_string(SchemeKind kind) noexcept;
std::optional<SchemeKind> scheme_kind_from_string(std::string_view name) noexcept;

enum class LineRole { DrainLine, SourceLine, GateLine };

std::string_view to_string(LineRole role) noexcept;
std::optional<LineRole> line_role_from_string(std::string_view name) noexcept;

struct LineRef {
  LineRole role;
  int index = 0;  // ignored for the gate line

  bool operator==(const LineRef&) const = default;
};

struct AmmeterEntry {
  LineRef line;
  double sign = 1.0;
};

// A complete assignment of potentials to every line plus the set of lines
// whose signed currents are summed into the reading.
struct BiasScheme {
  SchemeKind kind = SchemeKind::Regular;
  int selected_row = 0;
  int selected_col = 0;
  double v_gate = 0.0;
  std::vector<double> drain_v;   // per row
  std::vector<double> source_v;  // per column
  std::vector<AmmeterEntry> ammeter;
};

// Builds the line assignment for one scheme kind. Defaults follow the
// reference bias point: v_drive = 0.5 V on driven lines, v_gate_on = 2 V on
// the gate where the scheme gates cells on. Line assignments per kind:
//   Regular:             selected source 0, every other line v_drive,
//                        gate v_gate_on, ammeter = selected drain line.
//   GateLeak:            selected drain and source 0, other lines v_drive,
//                        gate v_gate_on, ammeter = gate line.
//   GateLeakAlt:         GateLeak with every source line 0.
//   NonSelLeak:          gate 0, selected source 0, all other lines v_drive,
//                        ammeter = every non-selected drain and source line.
//   NonSelLeakSelGnd:    NonSelLeak with the selected drain line 0.
//   NonSelLeakOthersGnd: gate 0, selected drain v_drive, every other line 0,
//                        same ammeter as NonSelLeak.
//   DrainLeak:           gate 0, selected source 0, all other lines v_drive,
//                        ammeter = selected drain line.
// Throws ConfigError for an out-of-bounds selection or v_drive == 0.
BiasScheme make_bias_scheme(SchemeKind kind, int selected_row, int selected_col,
                            int n_rows, int n_cols, double v_drive = 0.5,
                            double v_gate_on = 2.0);

// Per-line currents, each positive when the line sources current into the
// array. Their sum (gate included) is zero up to accumulation rounding.
struct LineCurrents {
  std::vector<double> drain;
  std::vector<double> source;
  double gate = 0.0;
  double reading = 0.0;  // signed ammeter sum

  double line_current(const LineRef& ref) const;
  double total() const;            // signed sum over every line
  double total_magnitude() const;  // sum of |line current|, tolerance scale
};

// Evaluates one scheme. Every line is an ideal voltage source; each cell
// contributes independently from its pinned terminal voltages: channel
// current onto its drain and source lines, gate-leak branches onto all
// three. When noise_seed is given, each cell draws one channel factor and
// one gate-leak factor from derive_seed(derive_seed(noise_seed, r), c);
// per-cell streams are independent, so evaluation order does not matter.
LineCurrents evaluate_scheme(const Crossbar& crossbar, const BiasScheme& scheme,
                             std::optional<std::uint64_t> noise_seed = std::nullopt);

}  // namespace cntpuf
