#include <doctest.h>

#include <cmath>
#include <vector>

#include "cntpuf/crossbar.hpp"
#include "cntpuf/errors.hpp"
#include "test_helpers.hpp"

using namespace cntpuf;

namespace {

// Independent re-derivation of the documented seed split and class pick,
// written against the published constants rather than Rng/sample_cell.
namespace oracle {

std::uint64_t finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t child(std::uint64_t seed, std::uint64_t stream) {
  return finalize(seed ^ (0x9E3779B97F4A7C15ull * (stream + 0x632BE59BD9B4E019ull)));
}

CellClass cell_class(const ClassMix& mix, std::uint64_t master, int r, int c) {
  const std::uint64_t cell_seed = child(child(master, static_cast<std::uint64_t>(r)),
                                        static_cast<std::uint64_t>(c));
  // first draw of the SplitMix sequence seeded with cell_seed
  const std::uint64_t raw = finalize(cell_seed + 0x9E3779B97F4A7C15ull);
  const double u = static_cast<double>(raw >> 11) * 0x1.0p-53;
  if (u < mix.p_metallic) return CellClass::Metallic;
  if (u < mix.p_metallic + mix.p_semiconducting) return CellClass::Semiconducting;
  return CellClass::Insulating;
}

}  // namespace oracle

Crossbar all_zero_crossbar(int n_rows, int n_cols) {
  Crossbar xbar;
  xbar.n_rows = n_rows;
  xbar.n_cols = n_cols;
  xbar.cells.assign(static_cast<std::size_t>(n_rows) * n_cols, CellModel{});
  return xbar;
}

}  // namespace

TEST_CASE("all-insulating mix fills the default grid with insulating cells") {
  ClassMix mix;
  mix.p_metallic = mix.p_semiconducting = 0.0;
  mix.p_insulating = 1.0;
  const Crossbar xbar = build_crossbar(mix, 12, 12, 5);
  CHECK(xbar.cell_count() == 144);
  for (const CellModel& cell : xbar.cells)
    CHECK(cell.cell_class == CellClass::Insulating);
}

TEST_CASE("crossbar build is deterministic") {
  const ClassMix mix;
  const Crossbar a = build_crossbar(mix, 12, 12, 99);
  const Crossbar b = build_crossbar(mix, 12, 12, 99);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].cell_class == b.cells[i].cell_class);
    CHECK(a.cells[i].g_on == b.cells[i].g_on);
    CHECK(a.cells[i].g_off == b.cells[i].g_off);
    CHECK(a.cells[i].g_gate == b.cells[i].g_gate);
    CHECK(a.cells[i].v_th == b.cells[i].v_th);
  }
}

TEST_CASE("per-cell classes match an independent re-derivation of the seed split") {
  ClassMix mix;
  mix.p_metallic = 0.2;
  mix.p_semiconducting = 0.4;
  mix.p_insulating = 0.4;
  const std::uint64_t master = 4242;
  const Crossbar xbar = build_crossbar(mix, 12, 12, master);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c)
      CHECK(xbar.at(r, c).cell_class == oracle::cell_class(mix, master, r, c));
}

TEST_CASE("sub-grids reproduce independently of the full dimensions") {
  const ClassMix mix;
  const Crossbar small = build_crossbar(mix, 3, 4, 7);
  const Crossbar large = build_crossbar(mix, 12, 12, 7);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c)
      CHECK(small.at(r, c).g_on == large.at(r, c).g_on);
}

TEST_CASE("zero dimensions are rejected") {
  CHECK_THROWS_AS(build_crossbar(ClassMix{}, 0, 12, 1), ConfigError);
  CHECK_THROWS_AS(build_crossbar(ClassMix{}, 12, 0, 1), ConfigError);
}

TEST_CASE("regular scheme layout on the default grid") {
  const BiasScheme s = make_bias_scheme(SchemeKind::Regular, 0, 0, 12, 12, 0.5, 2.0);
  CHECK(s.v_gate == 2.0);
  CHECK(s.source_v[0] == 0.0);
  int at_drive = 0;
  for (double v : s.drain_v) at_drive += v == 0.5;
  for (double v : s.source_v) at_drive += v == 0.5;
  CHECK(at_drive == 23);
  REQUIRE(s.ammeter.size() == 1);
  CHECK(s.ammeter[0].line == LineRef{LineRole::DrainLine, 0});
}

TEST_CASE("regular scheme consequences for unselected cells") {
  const BiasScheme s = make_bias_scheme(SchemeKind::Regular, 3, 5, 12, 12);
  for (int r = 0; r < 12; ++r) {
    for (int c = 0; c < 12; ++c) {
      const double v_ds = s.drain_v[r] - s.source_v[c];
      if (c != 5) CHECK(v_ds == 0.0);           // both-unselected and same-drain-line
      else if (r != 3) CHECK(v_ds == 0.5);      // same-source-line cells conduct
    }
  }
  // ... but those conducting cells touch only non-ammeter drain lines.
  for (const AmmeterEntry& entry : s.ammeter) CHECK(entry.line.index == 3);
}

TEST_CASE("gate-leak scheme grounds both selected lines and reads the gate") {
  const BiasScheme s = make_bias_scheme(SchemeKind::GateLeak, 4, 7, 12, 12);
  CHECK(s.drain_v[4] == 0.0);
  CHECK(s.source_v[7] == 0.0);
  CHECK(s.drain_v[0] == 0.5);
  CHECK(s.v_gate == 2.0);
  REQUIRE(s.ammeter.size() == 1);
  CHECK(s.ammeter[0].line.role == LineRole::GateLine);
}

TEST_CASE("gate-leak-alt grounds every source line") {
  const BiasScheme s = make_bias_scheme(SchemeKind::GateLeakAlt, 4, 7, 12, 12);
  for (double v : s.source_v) CHECK(v == 0.0);
  CHECK(s.drain_v[4] == 0.0);
  CHECK(s.drain_v[5] == 0.5);
  CHECK(s.v_gate == 2.0);
}

TEST_CASE("drain-leak scheme grounds the global gate") {
  const BiasScheme s = make_bias_scheme(SchemeKind::DrainLeak, 2, 9, 12, 12);
  CHECK(s.v_gate == 0.0);
  CHECK(s.source_v[9] == 0.0);
  CHECK(s.drain_v[2] == 0.5);
  REQUIRE(s.ammeter.size() == 1);
  CHECK(s.ammeter[0].line == LineRef{LineRole::DrainLine, 2});
}

TEST_CASE("non-selected-leak ammeter excludes the selected lines") {
  for (SchemeKind kind : {SchemeKind::NonSelLeak, SchemeKind::NonSelLeakSelGnd,
                          SchemeKind::NonSelLeakOthersGnd}) {
    const BiasScheme s = make_bias_scheme(kind, 2, 9, 12, 12);
    CHECK(s.v_gate == 0.0);
    CHECK(s.ammeter.size() == 22);
    for (const AmmeterEntry& entry : s.ammeter) {
      CHECK(entry.sign == 1.0);
      if (entry.line.role == LineRole::DrainLine) CHECK(entry.line.index != 2);
      if (entry.line.role == LineRole::SourceLine) CHECK(entry.line.index != 9);
      CHECK(entry.line.role != LineRole::GateLine);
    }
  }
  CHECK(make_bias_scheme(SchemeKind::NonSelLeakSelGnd, 2, 9, 12, 12).drain_v[2] == 0.0);
}

TEST_CASE("nonsel-leak-othersgnd pins both-unselected cells to V_DS = 0") {
  const BiasScheme s = make_bias_scheme(SchemeKind::NonSelLeakOthersGnd, 2, 9, 12, 12);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c)
      if (r != 2 && c != 9) CHECK(s.drain_v[r] - s.source_v[c] == 0.0);
}

TEST_CASE("out-of-bounds selection and zero drive are rejected") {
  CHECK_THROWS_AS(make_bias_scheme(SchemeKind::Regular, 12, 0, 12, 12), ConfigError);
  CHECK_THROWS_AS(make_bias_scheme(SchemeKind::Regular, 0, -1, 12, 12), ConfigError);
  CHECK_THROWS_AS(make_bias_scheme(SchemeKind::Regular, 0, 0, 12, 12, 0.0), ConfigError);
}

TEST_CASE("zero-conductance crossbar evaluates to zero everywhere") {
  const Crossbar xbar = all_zero_crossbar(4, 5);
  const BiasScheme s = make_bias_scheme(SchemeKind::Regular, 1, 2, 4, 5);
  const LineCurrents out = evaluate_scheme(xbar, s);
  CHECK(out.reading == 0.0);
  CHECK(out.gate == 0.0);
  for (double v : out.drain) CHECK(v == 0.0);
  for (double v : out.source) CHECK(v == 0.0);
}

TEST_CASE("2x2 hand superposition: only the selected cell reaches the ammeter") {
  Crossbar xbar = all_zero_crossbar(2, 2);
  xbar.at(0, 0).cell_class = CellClass::Metallic;
  xbar.at(0, 0).g_on = xbar.at(0, 0).g_off = 1e-5;
  const BiasScheme s = make_bias_scheme(SchemeKind::Regular, 0, 0, 2, 2, 0.5, 2.0);
  const LineCurrents out = evaluate_scheme(xbar, s);
  CHECK(out.reading == 5.0e-6);
}

TEST_CASE("dimension mismatch is rejected") {
  const Crossbar xbar = all_zero_crossbar(3, 3);
  const BiasScheme s = make_bias_scheme(SchemeKind::Regular, 0, 0, 4, 4);
  CHECK_THROWS_AS(evaluate_scheme(xbar, s), ConfigError);
}

TEST_CASE("every line current sum satisfies Kirchhoff") {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const Crossbar xbar = testing::random_crossbar(rng);
    const BiasScheme s = testing::random_scheme(rng, xbar);
    const bool noisy = rng.next_double() < 0.5;
    const LineCurrents out =
        evaluate_scheme(xbar, s, noisy ? std::optional<std::uint64_t>(rng.next_u64())
                                       : std::nullopt);
    CHECK(std::abs(out.total()) <= 1e-18 + 1e-9 * out.total_magnitude());
  }
}

TEST_CASE("negating every potential negates every current exactly") {
  Rng rng(103);
  for (int trial = 0; trial < 300; ++trial) {
    const Crossbar xbar = testing::random_crossbar(rng);
    BiasScheme s = testing::random_scheme(rng, xbar);
    BiasScheme negated = s;
    negated.v_gate = -negated.v_gate;
    for (double& v : negated.drain_v) v = -v;
    for (double& v : negated.source_v) v = -v;

    const LineCurrents a = evaluate_scheme(xbar, s);
    const LineCurrents b = evaluate_scheme(xbar, negated);
    CHECK(b.reading == -a.reading);
    CHECK(b.gate == -a.gate);
    for (std::size_t i = 0; i < a.drain.size(); ++i) CHECK(b.drain[i] == -a.drain[i]);
    for (std::size_t i = 0; i < a.source.size(); ++i) CHECK(b.source[i] == -a.source[i]);
  }
}

TEST_CASE("regular reading equals the selected cell current when gate leak is zero") {
  Rng rng(107);
  for (int trial = 0; trial < 200; ++trial) {
    Crossbar xbar = testing::random_crossbar(rng);
    for (CellModel& cell : xbar.cells) cell.g_gate = 0.0;
    const int r = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(xbar.n_rows));
    const int c = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(xbar.n_cols));
    const BiasScheme s = make_bias_scheme(SchemeKind::Regular, r, c, xbar.n_rows,
                                          xbar.n_cols, 0.5, 2.0);
    const double direct = cell_drain_current(xbar.at(r, c), 2.0, 0.5, 0.0);
    CHECK(evaluate_scheme(xbar, s).reading == direct);
  }
}

TEST_CASE("non-selected-leak readings ignore the selected cell's model") {
  Rng rng(109);
  for (int trial = 0; trial < 200; ++trial) {
    Crossbar xbar = testing::random_crossbar(rng);
    const int r = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(xbar.n_rows));
    const int c = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(xbar.n_cols));
    constexpr SchemeKind kinds[] = {SchemeKind::NonSelLeak, SchemeKind::NonSelLeakSelGnd,
                                    SchemeKind::NonSelLeakOthersGnd};
    const BiasScheme s = make_bias_scheme(kinds[trial % 3], r, c, xbar.n_rows, xbar.n_cols);
    const bool noisy = rng.next_double() < 0.5;
    const std::optional<std::uint64_t> noise_seed =
        noisy ? std::optional<std::uint64_t>(rng.next_u64()) : std::nullopt;

    const double before = evaluate_scheme(xbar, s, noise_seed).reading;
    xbar.at(r, c) = testing::random_cell(rng);
    CHECK(evaluate_scheme(xbar, s, noise_seed).reading == before);
  }
}

TEST_CASE("drain-leak reading equals the selected off-state leakage when gate leak is zero") {
  Rng rng(113);
  for (int trial = 0; trial < 200; ++trial) {
    Crossbar xbar = testing::random_crossbar(rng);
    for (CellModel& cell : xbar.cells) cell.g_gate = 0.0;
    const int r = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(xbar.n_rows));
    const int c = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(xbar.n_cols));
    const BiasScheme s =
        make_bias_scheme(SchemeKind::DrainLeak, r, c, xbar.n_rows, xbar.n_cols, 0.5, 2.0);
    CHECK(evaluate_scheme(xbar, s).reading == xbar.at(r, c).g_off * 0.5);
  }
}
