#pragma once

#include <cstdint>
#include <string>

#include "cntpuf/crossbar.hpp"
#include "cntpuf/procedures.hpp"

namespace cntpuf {

// Which line roles an attacker can reach from outside the package. Models
// countermeasures as access control: burying or on-chip routing of the
// drain wiring simply removes drain-lines from this set.
struct ProbeAccess {
  bool drain_lines = true;
  bool source_lines = true;
  bool gate_line = true;

  bool allows(LineRole role) const noexcept;
  bool any() const noexcept { return drain_lines || source_lines || gate_line; }

  bool operator==(const ProbeAccess&) const = default;
};

// One complete experiment description. Everything downstream (crossbar,
// readouts, attacks) derives its randomness from the master seed through
// the stream constants in seeds.hpp.
struct Scenario {
  int n_rows = 12;
  int n_cols = 12;
  ClassMix mix;                 // carries noise_sigma and parameter ranges
  double v_drive = 0.5;         // V, nonzero
  double v_gate_on = 2.0;       // V
  int repetitions = 10;         // per-cell samples for traces
  int readout_repetitions = 1;  // per-cell samples for the legitimate readout
  int enrollment_reads = 10;
  std::uint64_t seed = 1;
  ProbeAccess probe_access;

  double noise_sigma() const noexcept { return mix.noise_sigma; }

  MeasureParams measure_params() const noexcept {
    return {v_drive, v_gate_on, mix.noise_sigma > 0.0};
  }

  std::uint64_t crossbar_seed() const noexcept {
    return derive_seed(seed, kSeedStreamCrossbar);
  }
  std::uint64_t readout_seed(std::uint64_t read_index = 0) const noexcept {
    return derive_seed(derive_seed(seed, kSeedStreamReadout), read_index);
  }
  std::uint64_t enroll_seed() const noexcept {
    return derive_seed(seed, kSeedStreamEnroll);
  }
  std::uint64_t attack_seed(SchemeKind kind) const noexcept {
    return derive_seed(derive_seed(seed, kSeedStreamAttack),
                       static_cast<std::uint64_t>(kind));
  }

  Crossbar build() const;
  ThresholdRule threshold_rule() const;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Parses a scenario from configuration text (JSON). Unknown keys and range
// violations raise ConfigError with the offending key path; omitted
// optional fields take the documented defaults.
Scenario parse_scenario(const std::string& text);

// Reads and parses a scenario file.
Scenario load_scenario(const std::string& path);

// Canonical serialization: sorted keys, fixed layout, shortest round-trip
// number formatting. parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

// FNV-1a over the canonical serialization, so the hash is insensitive to
// formatting and key order but changes with any semantic field.
std::string scenario_hash(const Scenario& scenario);

struct AccessCheck {
  bool permitted = true;
  std::string blocked_reason;  // empty when permitted
};

// An attack needs every ammeter line and every line it must drive away
// from the idle state (all lines grounded) to be probeable. The legitimate
// readout does not go through this check: it runs on the chip's own path.
AccessCheck check_probe_access(const Scenario& scenario, const BiasScheme& scheme);

}  // namespace cntpuf
