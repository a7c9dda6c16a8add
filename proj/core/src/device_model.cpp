#include "cntpuf/device_model.hpp"

#include <cmath>
#include <string>

#include "cntpuf/errors.hpp"

namespace cntpuf {

std::string_view to_string(CellClass c) noexcept {
  switch (c) {
    case CellClass::Metallic: return "metallic";
    case CellClass::Semiconducting: return "semiconducting";
    case CellClass::Insulating: return "insulating";
  }
  return "insulating";
}

std::optional<CellClass> cell_class_from_string(std::string_view name) noexcept {
  if (name == "metallic") return CellClass::Metallic;
  if (name == "semiconducting") return CellClass::Semiconducting;
  if (name == "insulating") return CellClass::Insulating;
  return std::nullopt;
}

bool CellModel::gated_on(double v_gate, double v_source) const noexcept {
  switch (cell_class) {
    case CellClass::Metallic: return true;
    case CellClass::Semiconducting: return std::abs(v_gate - v_source) >= v_th;
    case CellClass::Insulating: return false;
  }
  return false;
}

const ClassRanges& ClassMix::ranges_for(CellClass c) const noexcept {
  switch (c) {
    case CellClass::Metallic: return metallic;
    case CellClass::Semiconducting: return semiconducting;
    case CellClass::Insulating: return insulating;
  }
  return insulating;
}

namespace {

void validate_range(const ParamRange& r, const std::string& field) {
  if (!(r.lo <= r.hi))
    throw ConfigError(field + ": range bounds inverted (" +
                      std::to_string(r.lo) + " > " + std::to_string(r.hi) + ")");
  if (r.lo < 0.0) throw ConfigError(field + ": negative bound");
  if (r.lo < r.hi && r.lo <= 0.0)
    throw ConfigError(field + ": log-uniform range needs a positive lower bound");
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi))
    throw ConfigError(field + ": non-finite bound");
}

void validate_class(const ClassRanges& r, const std::string& prefix) {
  validate_range(r.g_on, prefix + ".g_on");
  validate_range(r.g_off, prefix + ".g_off");
  validate_range(r.g_gate, prefix + ".g_gate");
}

bool same_range(const ParamRange& a, const ParamRange& b) {
  return a.lo == b.lo && a.hi == b.hi;
}

}  // namespace

void ClassMix::validate() const {
  const double p[] = {p_metallic, p_semiconducting, p_insulating};
  for (double v : p)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ConfigError("mix: class probabilities must be nonnegative");
  const double sum = p_metallic + p_semiconducting + p_insulating;
  if (std::abs(sum - 1.0) > 1e-12)
    throw ConfigError("mix: class probabilities sum to " + std::to_string(sum) +
                      " (must be 1)");

  validate_class(metallic, "mix.metallic");
  validate_class(semiconducting, "mix.semiconducting");
  validate_class(insulating, "mix.insulating");

  // Metallic and Insulating conduct identically on and off, so their g_on
  // range must match their g_off range; one draw serves both.
  if (!same_range(metallic.g_on, metallic.g_off))
    throw ConfigError("mix.metallic: g_on and g_off ranges must match");
  if (!same_range(insulating.g_on, insulating.g_off))
    throw ConfigError("mix.insulating: g_on and g_off ranges must match");
  if (!(semiconducting.g_on.lo > semiconducting.g_off.hi))
    throw ConfigError(
        "mix.semiconducting: g_on range must sit strictly above g_off");

  if (!allow_off_range_overlap) {
    if (!(insulating.g_off.hi < semiconducting.g_off.lo))
      throw ConfigError(
          "mix: semiconducting g_off range overlaps the insulating range "
          "(set allow_off_range_overlap to permit)");
    if (!(insulating.g_off.hi < metallic.g_off.lo))
      throw ConfigError(
          "mix: metallic g_off range overlaps the insulating range "
          "(set allow_off_range_overlap to permit)");
  }

  if (!(v_th.lo <= v_th.hi)) throw ConfigError("mix.v_th: range bounds inverted");
  if (!(v_th.lo > 0.0)) throw ConfigError("mix.v_th: threshold voltage must be positive");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw ConfigError("mix.noise_sigma: must be nonnegative");
}

CellModel sample_cell(const ClassMix& mix, std::uint64_t seed) {
  mix.validate();
  Rng rng(seed);

  const double u = rng.next_double();
  CellClass cls;
  if (u < mix.p_metallic)
    cls = CellClass::Metallic;
  else if (u < mix.p_metallic + mix.p_semiconducting)
    cls = CellClass::Semiconducting;
  else
    cls = CellClass::Insulating;

  const ClassRanges& ranges = mix.ranges_for(cls);
  CellModel cell;
  cell.cell_class = cls;
  cell.g_on = rng.next_log_uniform(ranges.g_on.lo, ranges.g_on.hi);
  if (cls == CellClass::Semiconducting)
    cell.g_off = rng.next_log_uniform(ranges.g_off.lo, ranges.g_off.hi);
  else
    cell.g_off = cell.g_on;
  cell.g_gate = rng.next_log_uniform(ranges.g_gate.lo, ranges.g_gate.hi);
  cell.v_th = rng.next_uniform(mix.v_th.lo, mix.v_th.hi);
  cell.noise_sigma = mix.noise_sigma;
  return cell;
}

double cell_drain_current(const CellModel& cell, double v_gate, double v_drain,
                          double v_source, std::optional<double> noise_z) noexcept {
  const double g = cell.gated_on(v_gate, v_source) ? cell.g_on : cell.g_off;
  double current = g * (v_drain - v_source);
  if (noise_z) current *= std::exp(cell.noise_sigma * *noise_z);
  return current;
}

GateLeakPair gate_leak_currents(const CellModel& cell, double v_gate,
                                double v_drain, double v_source,
                                std::optional<double> noise_z) noexcept {
  const double half = 0.5 * cell.g_gate;
  const double factor = noise_z ? std::exp(cell.noise_sigma * *noise_z) : 1.0;
  return {half * (v_gate - v_drain) * factor,
          half * (v_gate - v_source) * factor};
}

double cell_gate_current(const CellModel& cell, double v_gate, double v_drain,
                         double v_source, std::optional<double> noise_z) noexcept {
  const GateLeakPair pair = gate_leak_currents(cell, v_gate, v_drain, v_source, noise_z);
  return pair.to_drain + pair.to_source;
}

}  // namespace cntpuf
