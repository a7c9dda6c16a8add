#include "cntpuf/crossbar.hpp"

#include <cmath>
#include <string>

#include "cntpuf/errors.hpp"

namespace cntpuf {

Crossbar build_crossbar(const ClassMix& mix, int n_rows, int n_cols,
                        std::uint64_t seed) {
  if (n_rows < 1 || n_cols < 1)
    throw ConfigError("crossbar dimensions must be positive (got " +
                      std::to_string(n_rows) + "x" + std::to_string(n_cols) + ")");
  mix.validate();

  Crossbar xbar;
  xbar.n_rows = n_rows;
  xbar.n_cols = n_cols;
  xbar.cells.reserve(static_cast<std::size_t>(n_rows) * n_cols);
  for (int r = 0; r < n_rows; ++r) {
    const std::uint64_t row_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    for (int c = 0; c < n_cols; ++c)
      xbar.cells.push_back(
          sample_cell(mix, derive_seed(row_seed, static_cast<std::uint64_t>(c))));
  }
  return xbar;
}

bool is_attack_kind(SchemeKind kind) noexcept {
  return kind != SchemeKind::Regular;
}

std::string_view to_string(SchemeKind kind) noexcept {
  switch (kind) {
    case SchemeKind::Regular: return "regular";
    case SchemeKind::GateLeak: return "gate-leak";
    case SchemeKind::GateLeakAlt: return "gate-leak-alt";
    case SchemeKind::NonSelLeak: return "nonsel-leak";
    case SchemeKind::NonSelLeakSelGnd: return "nonsel-leak-selgnd";
    case SchemeKind::NonSelLeakOthersGnd: return "nonsel-leak-othersgnd";
    case SchemeKind::DrainLeak: return "drain-leak";
  }
  return "regular";
}

std::optional<SchemeKind> scheme_kind_from_string(std::string_view name) noexcept {
  if (name == "regular") return SchemeKind::Regular;
  if (name == "gate-leak") return SchemeKind::GateLeak;
  if (name == "gate-leak-alt") return SchemeKind::GateLeakAlt;
  if (name == "nonsel-leak") return SchemeKind::NonSelLeak;
  if (name == "nonsel-leak-selgnd") return SchemeKind::NonSelLeakSelGnd;
  if (name == "nonsel-leak-othersgnd") return SchemeKind::NonSelLeakOthersGnd;
  if (name == "drain-leak") return SchemeKind::DrainLeak;
  return std::nullopt;
}

std::string_view to_string(LineRole role) noexcept {
  switch (role) {
    case LineRole::DrainLine: return "drain-lines";
    case LineRole::SourceLine: return "source-lines";
    case LineRole::GateLine: return "gate-line";
  }
  return "gate-line";
}

std::optional<LineRole> line_role_from_string(std::string_view name) noexcept {
  if (name == "drain-lines") return LineRole::DrainLine;
  if (name == "source-lines") return LineRole::SourceLine;
  if (name == "gate-line") return LineRole::GateLine;
  return std::nullopt;
}

namespace {

// Ammeter over every drain and source line except the selected ones, signs
// positive so leakage flowing from the lines into the array adds up.
std::vector<AmmeterEntry> non_selected_ammeter(int selected_row, int selected_col,
                                               int n_rows, int n_cols) {
  std::vector<AmmeterEntry> ammeter;
  ammeter.reserve(static_cast<std::size_t>(n_rows + n_cols) - 2);
  for (int r = 0; r < n_rows; ++r)
    if (r != selected_row) ammeter.push_back({{LineRole::DrainLine, r}, 1.0});
  for (int c = 0; c < n_cols; ++c)
    if (c != selected_col) ammeter.push_back({{LineRole::SourceLine, c}, 1.0});
  return ammeter;
}

}  // namespace

BiasScheme make_bias_scheme(SchemeKind kind, int selected_row, int selected_col,
                            int n_rows, int n_cols, double v_drive,
                            double v_gate_on) {
  if (n_rows < 1 || n_cols < 1)
    throw ConfigError("bias scheme needs positive grid dimensions");
  if (selected_row < 0 || selected_row >= n_rows || selected_col < 0 ||
      selected_col >= n_cols)
    throw ConfigError("selected cell (" + std::to_string(selected_row) + "," +
                      std::to_string(selected_col) + ") outside " +
                      std::to_string(n_rows) + "x" + std::to_string(n_cols) +
                      " grid");
  if (v_drive == 0.0 || !std::isfinite(v_drive) || !std::isfinite(v_gate_on))
    throw ConfigError("v_drive must be finite and nonzero");

  BiasScheme s;
  s.kind = kind;
  s.selected_row = selected_row;
  s.selected_col = selected_col;

  switch (kind) {
    case SchemeKind::Regular:
      // Selected source grounded, every other line at v_drive so both-
      // unselected cells and same-drain-line cells see V_DS = 0.
      s.v_gate = v_gate_on;
      s.drain_v.assign(n_rows, v_drive);
      s.source_v.assign(n_cols, v_drive);
      s.source_v[selected_col] = 0.0;
      s.ammeter = {{{LineRole::DrainLine, selected_row}, 1.0}};
      break;

    case SchemeKind::GateLeak:
      // Selected cell pinned to V_DS = 0 by grounding both its lines; the
      // reading is the whole-array gate current.
      s.v_gate = v_gate_on;
      s.drain_v.assign(n_rows, v_drive);
      s.source_v.assign(n_cols, v_drive);
      s.drain_v[selected_row] = 0.0;
      s.source_v[selected_col] = 0.0;
      s.ammeter = {{{LineRole::GateLine, 0}, 1.0}};
      break;

    case SchemeKind::GateLeakAlt:
      // Gate-leak variant with every source line grounded: most cells are
      // gated on, only the selected drain line's cells carry no current.
      s.v_gate = v_gate_on;
      s.drain_v.assign(n_rows, v_drive);
      s.drain_v[selected_row] = 0.0;
      s.source_v.assign(n_cols, 0.0);
      s.ammeter = {{{LineRole::GateLine, 0}, 1.0}};
      break;

    case SchemeKind::NonSelLeak:
      s.v_gate = 0.0;
      s.drain_v.assign(n_rows, v_drive);
      s.source_v.assign(n_cols, v_drive);
      s.source_v[selected_col] = 0.0;
      s.ammeter = non_selected_ammeter(selected_row, selected_col, n_rows, n_cols);
      break;

    case SchemeKind::NonSelLeakSelGnd:
      s.v_gate = 0.0;
      s.drain_v.assign(n_rows, v_drive);
      s.drain_v[selected_row] = 0.0;
      s.source_v.assign(n_cols, v_drive);
      s.source_v[selected_col] = 0.0;
      s.ammeter = non_selected_ammeter(selected_row, selected_col, n_rows, n_cols);
      break;

    case SchemeKind::NonSelLeakOthersGnd:
      // Everything grounded except the selected drain line, so both-
      // unselected cells see V_DS = 0.
      s.v_gate = 0.0;
      s.drain_v.assign(n_rows, 0.0);
      s.drain_v[selected_row] = v_drive;
      s.source_v.assign(n_cols, 0.0);
      s.ammeter = non_selected_ammeter(selected_row, selected_col, n_rows, n_cols);
      break;

    case SchemeKind::DrainLeak:
      // Regular layout with the gate grounded: the selected drain line sees
      // only the selected cell's off-state leakage plus gate-leak residue.
      s.v_gate = 0.0;
      s.drain_v.assign(n_rows, v_drive);
      s.source_v.assign(n_cols, v_drive);
      s.source_v[selected_col] = 0.0;
      s.ammeter = {{{LineRole::DrainLine, selected_row}, 1.0}};
      break;
  }
  return s;
}

double LineCurrents::line_current(const LineRef& ref) const {
  switch (ref.role) {
    case LineRole::DrainLine: return drain.at(static_cast<std::size_t>(ref.index));
    case LineRole::SourceLine: return source.at(static_cast<std::size_t>(ref.index));
    case LineRole::GateLine: return gate;
  }
  return 0.0;
}

double LineCurrents::total() const {
  double sum = gate;
  for (double v : drain) sum += v;
  for (double v : source) sum += v;
  return sum;
}

double LineCurrents::total_magnitude() const {
  double sum = std::abs(gate);
  for (double v : drain) sum += std::abs(v);
  for (double v : source) sum += std::abs(v);
  return sum;
}

LineCurrents evaluate_scheme(const Crossbar& crossbar, const BiasScheme& scheme,
                             std::optional<std::uint64_t> noise_seed) {
  if (static_cast<int>(scheme.drain_v.size()) != crossbar.n_rows ||
      static_cast<int>(scheme.source_v.size()) != crossbar.n_cols)
    throw ConfigError("bias scheme dimensions do not match crossbar");

  LineCurrents out;
  out.drain.assign(static_cast<std::size_t>(crossbar.n_rows), 0.0);
  out.source.assign(static_cast<std::size_t>(crossbar.n_cols), 0.0);

  for (int r = 0; r < crossbar.n_rows; ++r) {
    const double v_drain = scheme.drain_v[static_cast<std::size_t>(r)];
    const std::uint64_t row_seed =
        noise_seed ? derive_seed(*noise_seed, static_cast<std::uint64_t>(r)) : 0;
    for (int c = 0; c < crossbar.n_cols; ++c) {
      const CellModel& cell = crossbar.at(r, c);
      const double v_source = scheme.source_v[static_cast<std::size_t>(c)];

      std::optional<double> z_channel, z_gate;
      if (noise_seed) {
        Rng rng(derive_seed(row_seed, static_cast<std::uint64_t>(c)));
        z_channel = rng.next_normal();
        z_gate = rng.next_normal();
      }

      const double i_channel =
          cell_drain_current(cell, scheme.v_gate, v_drain, v_source, z_channel);
      const GateLeakPair leak =
          gate_leak_currents(cell, scheme.v_gate, v_drain, v_source, z_gate);

      // Each branch appears on exactly two lines with opposite sign, so the
      // three line sums cancel per cell and KCL holds by construction.
      out.drain[static_cast<std::size_t>(r)] += i_channel - leak.to_drain;
      out.source[static_cast<std::size_t>(c)] += -i_channel - leak.to_source;
      out.gate += leak.to_drain + leak.to_source;
    }
  }

  for (const AmmeterEntry& entry : scheme.ammeter)
    out.reading += entry.sign * out.line_current(entry.line);
  return out;
}

}  // namespace cntpuf
