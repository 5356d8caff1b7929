// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "codecarta/error.hpp"
#include "codecarta/miner.hpp"
#include "codecarta/synth.hpp"
#include "temp_dir.hpp"

using namespace codecarta;

namespace {

EntityGraph mine_fixture(const SynthFixture& f, const testsupport::TempDir& dir) {
  write_fixture(f, dir.path());
  MinerConfig c;
  c.root = dir.path();
  return mine(c);
}

void check_parameter_error(const SynthConfig& c) {
  try {
    synth(c);
    FAIL("expected a parameter error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parameter);
  }
}

}  // namespace

TEST_CASE("infeasible configurations are rejected") {
  SynthConfig c;
  c.projects = 0;
  check_parameter_error(c);
  c.projects = 5;
  c.target_nodes = 5;
  check_parameter_error(c);
  c.target_nodes = 100;
  c.error_rate = 1.5;
  check_parameter_error(c);
  c.error_rate = 0.6;
  c.warning_rate = 0.6;
  check_parameter_error(c);
  c.warning_rate = -0.1;
  check_parameter_error(c);
}

TEST_CASE("same seed, same tree") {
  SynthConfig c;
  c.target_nodes = 500;
  c.error_rate = 0.1;
  const SynthFixture a = synth(c);
  const SynthFixture b = synth(c);
  CHECK(a.files == b.files);
  CHECK(a.ledger == b.ledger);
  c.seed = 8;
  CHECK(synth(c).files != a.files);
}

TEST_CASE("mined graph matches the ledger across sizes and seeds") {
  for (std::size_t projects : {1u, 2u, 8u}) {
    for (std::size_t extra : {0u, 1u, 2u, 3u, 41u, 300u}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        SynthConfig c;
        c.projects = projects;
        c.target_nodes = projects + 1 + extra;
        c.seed = seed;
        c.error_rate = 0.05;
        c.warning_rate = 0.1;
        CAPTURE(projects);
        CAPTURE(extra);
        CAPTURE(seed);
        const SynthFixture f = synth(c);
        CHECK(f.ledger.nodes == c.target_nodes);
        testsupport::TempDir dir;
        const EntityGraph g = mine_fixture(f, dir);
        CHECK(validate_graph(g).valid());
        CHECK_MESSAGE(ledger_of(g) == f.ledger, "want " << to_json(f.ledger) << "\ngot " << to_json(ledger_of(g)));
      }
    }
  }
}

TEST_CASE("external findings land on the declaration they name") {
  SynthConfig c;
  c.target_nodes = 800;
  c.error_rate = 0.2;
  c.warning_rate = 0.2;
  testsupport::TempDir dir;
  const EntityGraph g = mine_fixture(synth(c), dir);
  std::size_t seen = 0;
  for (const auto& [t, e] : g.entities()) {
    for (const Diagnostic& d : e.diagnostics) {
      ++seen;
      CHECK(d.message == "synthetic finding on " + e.name);
    }
  }
  CHECK(seen > 100);
}

TEST_CASE("zero error rate gives zero errors") {
  SynthConfig c;
  c.target_nodes = 600;
  c.warning_rate = 0.3;
  testsupport::TempDir dir;
  const SynthLedger mined = ledger_of(mine_fixture(synth(c), dir));
  CHECK(mined.diagnostics.at(Severity::Error) == 0);
  CHECK(mined.diagnostics.at(Severity::Warning) > 0);
}

TEST_CASE("the scale fixture has exactly 3760 nodes") {
  SynthConfig c;
  c.projects = 8;
  c.target_nodes = 3760;
  c.seed = 7;
  const SynthFixture f = synth(c);
  testsupport::TempDir dir;
  const EntityGraph g = mine_fixture(f, dir);
  CHECK(g.size() == 3760);
  CHECK(ledger_of(g) == f.ledger);
  for (EntityKind k : kAllEntityKinds) CHECK(f.ledger.entities.at(k) > 0);
}
