// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "codecarta/miner.hpp"

namespace codecarta::miner {

struct ManifestProblem {
  std::string file;
  std::string message;
};

struct ProjectInfo {
  std::string name;
  std::string dir;       // relative to the root, "" for the root itself
  std::string manifest;  // relative path, empty when there is none
  std::vector<std::string> dependencies;
  std::vector<ManifestProblem> problems;
};

struct Workspace {
  std::string name;
  std::vector<ProjectInfo> projects;  // sorted by dir
  std::vector<ManifestProblem> problems;
  std::optional<std::filesystem::path> diagnostics;
  std::vector<std::string> sources;  // relative paths, sorted
};

/// True when `rel` or one of its parent directories matches a pattern.
/// Patterns containing '/' match the whole relative path ('*' stops at '/');
/// others match any single path component.
bool glob_matches(const std::vector<std::string>& globs, const std::string& rel);

/// Throws Error(Io) for an unreadable root.
Workspace discover(const MinerConfig& config);

}  // namespace codecarta::miner
