#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cntpuf/crossbar.hpp"

namespace cntpuf {

struct CellRef {
  int row = 0;
  int col = 0;

  bool operator==(const CellRef&) const = default;
};

// Bias and noise settings shared by every measurement in one run.
struct MeasureParams {
  double v_drive = 0.5;   // V
  double v_gate_on = 2.0; // V
  bool noise = true;      // false evaluates with noise draws disabled
};

// One noisy current reading with full provenance.
struct MeasurementSample {
  CellRef cell;
  SchemeKind kind = SchemeKind::Regular;
  int repetition = 0;
  double reading = 0.0;  // A
  std::optional<std::uint64_t> noise_seed;  // absent when noise was off
};

// Maps a reading magnitude to a logical bit. above_is_one = true means
// |reading| > threshold reads as 1; the comparison is strict, so a reading
// exactly at the threshold takes the below side.
struct ThresholdRule {
  double threshold = 0.0;  // A, > 0
  bool above_is_one = true;

  int classify(double reading) const noexcept;
};

// Default legitimate-readout rule for a mix: the geometric midpoint between
// the smallest on-state current and the largest insulating off-state
// current at the given drive voltage.
ThresholdRule default_threshold_rule(const ClassMix& mix, double v_drive);

// The response bits in row-major cell order plus the stability mask
// (mask bit 1 = stable/used).
struct Response {
  std::vector<std::uint8_t> bits;
  std::vector<std::uint8_t> mask;

  int length() const noexcept { return static_cast<int>(bits.size()); }
};

// Full probing record for one attack kind: per-cell sample lists in
// row-major order plus the simulator-only ground truth.
struct AttackTrace {
  SchemeKind kind = SchemeKind::DrainLeak;
  int n_rows = 0;
  int n_cols = 0;
  int repetitions = 0;
  std::vector<std::vector<MeasurementSample>> samples;  // [cell][repetition]
  std::vector<std::uint8_t> truth;  // logical value per cell, simulator-only

  int cell_count() const noexcept { return n_rows * n_cols; }
};

// Measures one cell `repetitions` times under the given scheme kind.
// Repetition k uses noise seed derive_seed(derive_seed(seed, cell_index), k)
// with cell_index = row * n_cols + col; deterministic per seed.
std::vector<MeasurementSample> measure_cell(const Crossbar& crossbar,
                                            SchemeKind kind, CellRef cell,
                                            const MeasureParams& params,
                                            int repetitions, std::uint64_t seed);

// Legitimate readout: per cell, Regular-scheme samples are thresholded and
// majority-voted (ties resolve to 0). The mask comes back all-ones.
Response read_response(const Crossbar& crossbar, const ThresholdRule& rule,
                       const MeasureParams& params, int repetitions,
                       std::uint64_t seed);

// Enrollment with stability masking: enrollment_reads full readouts (read k
// seeded derive_seed(seed, k)); a cell is stable iff its bit agrees across
// all reads. Stable cells keep the unanimous value, unstable cells take the
// majority (ties to 0) and are masked out. Requires enrollment_reads >= 2.
Response enroll_mask(const Crossbar& crossbar, const ThresholdRule& rule,
                     const MeasureParams& params, int enrollment_reads,
                     int repetitions, std::uint64_t seed);

// Probes every cell with the given attack scheme and attaches ground truth
// from the cell classes. Throws ConfigError when kind is not an attack kind.
AttackTrace run_attack_trace(const Crossbar& crossbar, SchemeKind kind,
                             const MeasureParams& params, int repetitions,
                             std::uint64_t seed);

}  // namespace cntpuf
