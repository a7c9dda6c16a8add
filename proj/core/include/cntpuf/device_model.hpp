#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "cntpuf/seeds.hpp"

namespace cntpuf {

// Conduction class of one CNT-FET cell. Metallic and Semiconducting cells
// read as logical 1 under the gated readout, Insulating cells as 0.
enum class CellClass { Metallic, Semiconducting, Insulating };

std::string_view to_string(CellClass c) noexcept;
std::optional<CellClass> cell_class_from_string(std::string_view name) noexcept;

// Electrical model of one cell. Linear two-state channel: the cell conducts
// with g_on when gated on and with g_off otherwise. The gate leak g_gate is
// split half toward the drain and half toward the source. Measurement noise
// is multiplicative log-normal on the current magnitude: a draw z scales a
// branch current by exp(noise_sigma * z).
struct CellModel {
  CellClass cell_class = CellClass::Insulating;
  double g_on = 0.0;         // S, drain-source conductance when gated on
  double g_off = 0.0;        // S, drain-source leakage when gated off
  double g_gate = 0.0;       // S, total gate-leak conductance
  double v_th = 1.0;         // V, gate threshold magnitude, > 0
  double noise_sigma = 0.0;  // log-normal noise scale, >= 0

  // True when the channel conducts with g_on: always for Metallic cells,
  // for Semiconducting cells iff |v_gate - v_source| >= v_th, never for
  // Insulating cells (whose g_on equals g_off anyway).
  bool gated_on(double v_gate, double v_source) const noexcept;

  bool logical_one() const noexcept { return cell_class != CellClass::Insulating; }
};

// Inclusive bound pair for a log-uniform parameter draw. lo > 0 is required
// whenever lo < hi; a degenerate range pins the parameter to that value.
struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

struct ClassRanges {
  ParamRange g_on;
  ParamRange g_off;
  ParamRange g_gate;
};

// Manufacturing-variation model: class probabilities plus per-class
// log-uniform conductance ranges. The defaults are calibrated so that
// on-state currents sit 5 to 6 decades above the insulating floor, the
// semiconducting off-state band sits about two decades above it, and the
// gate leak is of the same order as the floor (picoampere scale at the
// default drive voltage).
struct ClassMix {
  double p_metallic = 0.0;
  double p_semiconducting = 0.5;
  double p_insulating = 0.5;

  ClassRanges metallic = {{1e-7, 1e-5}, {1e-7, 1e-5}, {1e-13, 3e-12}};
  ClassRanges semiconducting = {{1e-7, 1e-5}, {1e-10, 1e-9}, {1e-13, 3e-12}};
  ClassRanges insulating = {{1e-13, 4e-12}, {1e-13, 4e-12}, {1e-13, 3e-12}};

  ParamRange v_th = {0.5, 1.5};  // V, sampled uniformly for every class
  double noise_sigma = 0.1;      // stamped onto every sampled cell

  // When false (the default) the Metallic and Semiconducting g_off ranges
  // must sit strictly above the Insulating range, which keeps off-state
  // currents ordered Metallic > Semiconducting > Insulating for every draw.
  bool allow_off_range_overlap = false;

  const ClassRanges& ranges_for(CellClass c) const noexcept;

  // Throws ConfigError naming the offending field. Checks: probabilities
  // nonnegative and summing to 1 within 1e-12; every range ordered and
  // nonnegative; Metallic and Insulating g_on ranges equal to their g_off
  // ranges (one draw serves both); Semiconducting g_on bounded strictly
  // above its g_off; v_th > 0; disjointness per allow_off_range_overlap.
  void validate() const;
};

// Draws one cell. The same (mix, seed) always produces the same cell.
// Draw order, fixed for reproducibility: class pick (one uniform against
// cumulative probabilities in order Metallic, Semiconducting, Insulating),
// then g_on (Metallic and Insulating reuse this draw as g_off), then g_off
// (Semiconducting only), then g_gate, then v_th (uniform).
CellModel sample_cell(const ClassMix& mix, std::uint64_t seed);

// Channel current flowing into the drain terminal and out of the source
// terminal; positive when v_drain > v_source, zero when they are equal.
// noise_z, when present, scales the magnitude by exp(noise_sigma * z).
double cell_drain_current(const CellModel& cell, double v_gate, double v_drain,
                          double v_source,
                          std::optional<double> noise_z = std::nullopt) noexcept;

// The two gate-leak branch currents, each carrying g_gate / 2. One noise
// draw scales both branches so the pair always sums to the gate current.
struct GateLeakPair {
  double to_drain;   // A, gate -> drain branch
  double to_source;  // A, gate -> source branch
};

GateLeakPair gate_leak_currents(const CellModel& cell, double v_gate,
                                double v_drain, double v_source,
                                std::optional<double> noise_z = std::nullopt) noexcept;

// Total current supplied by the gate line into the cell. A function of
// g_gate and the terminal voltages only, never of the conduction class.
double cell_gate_current(const CellModel& cell, double v_gate, double v_drain,
                         double v_source,
                         std::optional<double> noise_z = std::nullopt) noexcept;

}  // namespace cntpuf
