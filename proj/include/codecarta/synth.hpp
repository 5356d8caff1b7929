// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "codecarta/entity_model.hpp"

namespace codecarta {

// Seeded generator of synthetic C++ workspaces with known mined counts.

struct SynthConfig {
  std::size_t projects = 8;
  std::size_t target_nodes = 3760;
  std::uint64_t seed = 7;
  /// Probability per type or member of an external error / warning record.
  double error_rate = 0.0;
  double warning_rate = 0.0;
};

/// What mining the fixture must produce.
struct SynthLedger {
  std::size_t nodes = 0;
  std::map<EntityKind, std::size_t> entities;
  std::map<TypeKind, std::size_t> type_kinds;
  std::map<Severity, std::size_t> diagnostics;
  std::map<RelationId, std::size_t> relations;

  friend bool operator==(const SynthLedger&, const SynthLedger&) = default;
};

struct SynthFixture {
  std::map<std::string, std::string> files;  // relative path -> contents
  SynthLedger ledger;
};

/// Throws Error(Parameter) when target_nodes < projects + 1, projects == 0
/// or a rate lies outside [0, 1] (or both together exceed 1).
SynthFixture synth(const SynthConfig& config);

/// Writes every file below `dir` (created if needed) plus ledger.json.
/// Throws Error(Io).
void write_fixture(const SynthFixture& fixture, const std::filesystem::path& dir);

/// The same counts taken from a graph, every kind present (zero or not).
SynthLedger ledger_of(const EntityGraph& graph);

std::string to_json(const SynthLedger& ledger);

}  // namespace codecarta
