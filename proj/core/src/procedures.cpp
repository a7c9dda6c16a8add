#include "cntpuf/procedures.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cntpuf/errors.hpp"

namespace cntpuf {

int ThresholdRule::classify(double reading) const noexcept {
  const bool above = std::abs(reading) > threshold;
  return above == above_is_one ? 1 : 0;
}

ThresholdRule default_threshold_rule(const ClassMix& mix, double v_drive) {
  mix.validate();
  if (v_drive == 0.0 || !std::isfinite(v_drive))
    throw ConfigError("v_drive must be finite and nonzero");

  // Smallest current a gated-on logical-1 cell can produce vs the largest
  // an insulating cell can, both at |v_drive|; the rule sits at their
  // geometric midpoint. Classes with zero probability do not constrain it.
  double min_on = std::numeric_limits<double>::infinity();
  if (mix.p_semiconducting > 0.0) min_on = mix.semiconducting.g_on.lo;
  if (mix.p_metallic > 0.0) min_on = std::min(min_on, mix.metallic.g_on.lo);
  if (!std::isfinite(min_on))
    min_on = std::min(mix.semiconducting.g_on.lo, mix.metallic.g_on.lo);
  const double max_off = mix.insulating.g_off.hi;
  const double v = std::abs(v_drive);
  return {std::sqrt((min_on * v) * (max_off * v)), true};
}

std::vector<MeasurementSample> measure_cell(const Crossbar& crossbar,
                                            SchemeKind kind, CellRef cell,
                                            const MeasureParams& params,
                                            int repetitions, std::uint64_t seed) {
  if (repetitions < 1)
    throw ConfigError("repetitions must be >= 1 (got " +
                      std::to_string(repetitions) + ")");

  const BiasScheme scheme =
      make_bias_scheme(kind, cell.row, cell.col, crossbar.n_rows, crossbar.n_cols,
                       params.v_drive, params.v_gate_on);
  const std::uint64_t cell_seed =
      derive_seed(seed, static_cast<std::uint64_t>(crossbar.index(cell.row, cell.col)));

  std::vector<MeasurementSample> samples;
  samples.reserve(static_cast<std::size_t>(repetitions));
  for (int k = 0; k < repetitions; ++k) {
    std::optional<std::uint64_t> noise_seed;
    if (params.noise) noise_seed = derive_seed(cell_seed, static_cast<std::uint64_t>(k));
    const LineCurrents currents = evaluate_scheme(crossbar, scheme, noise_seed);
    samples.push_back({cell, kind, k, currents.reading, noise_seed});
  }
  return samples;
}

Response read_response(const Crossbar& crossbar, const ThresholdRule& rule,
                       const MeasureParams& params, int repetitions,
                       std::uint64_t seed) {
  if (!(rule.threshold > 0.0))
    throw ConfigError("threshold must be positive");

  Response response;
  response.bits.reserve(static_cast<std::size_t>(crossbar.cell_count()));
  for (int r = 0; r < crossbar.n_rows; ++r) {
    for (int c = 0; c < crossbar.n_cols; ++c) {
      const auto samples =
          measure_cell(crossbar, SchemeKind::Regular, {r, c}, params, repetitions, seed);
      int ones = 0;
      for (const MeasurementSample& s : samples) ones += rule.classify(s.reading);
      // Majority vote; ties resolve to 0.
      response.bits.push_back(2 * ones > repetitions ? 1 : 0);
    }
  }
  response.mask.assign(response.bits.size(), 1);
  return response;
}

Response enroll_mask(const Crossbar& crossbar, const ThresholdRule& rule,
                     const MeasureParams& params, int enrollment_reads,
                     int repetitions, std::uint64_t seed) {
  if (enrollment_reads < 2)
    throw ConfigError("enrollment requires at least 2 reads (got " +
                      std::to_string(enrollment_reads) + ")");

  std::vector<Response> reads;
  reads.reserve(static_cast<std::size_t>(enrollment_reads));
  for (int k = 0; k < enrollment_reads; ++k)
    reads.push_back(read_response(crossbar, rule, params, repetitions,
                                  derive_seed(seed, static_cast<std::uint64_t>(k))));

  const std::size_t n = reads.front().bits.size();
  Response enrolled;
  enrolled.bits.reserve(n);
  enrolled.mask.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    int ones = 0;
    for (const Response& read : reads) ones += read.bits[i];
    const bool stable = ones == 0 || ones == enrollment_reads;
    enrolled.bits.push_back(2 * ones > enrollment_reads ? 1 : 0);
    enrolled.mask.push_back(stable ? 1 : 0);
  }
  return enrolled;
}

AttackTrace run_attack_trace(const Crossbar& crossbar, SchemeKind kind,
                             const MeasureParams& params, int repetitions,
                             std::uint64_t seed) {
  if (!is_attack_kind(kind))
    throw ConfigError("regular readout is not an attack kind");

  AttackTrace trace;
  trace.kind = kind;
  trace.n_rows = crossbar.n_rows;
  trace.n_cols = crossbar.n_cols;
  trace.repetitions = repetitions;
  trace.samples.reserve(static_cast<std::size_t>(crossbar.cell_count()));
  trace.truth.reserve(static_cast<std::size_t>(crossbar.cell_count()));
  for (int r = 0; r < crossbar.n_rows; ++r) {
    for (int c = 0; c < crossbar.n_cols; ++c) {
      trace.samples.push_back(
          measure_cell(crossbar, kind, {r, c}, params, repetitions, seed));
      trace.truth.push_back(crossbar.at(r, c).logical_one() ? 1 : 0);
    }
  }
  return trace;
}

}  // namespace cntpuf
