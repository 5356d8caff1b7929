// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <array>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codecarta/entity_model.hpp"
#include "codecarta/glyph.hpp"
#include "codecarta/view_model.hpp"

namespace codecarta {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

using Positions = std::map<Token, Vec2>;

struct ForceSettings {
  double repulsion_strength = 2.0;
  double gravity = 0.05;
  double edge_weight_influence = 1.0;
  bool adjust_sizes = false;
  double theta_approx = 0.7;
  /// Distance-proportional gravity (true) or constant-magnitude gravity.
  bool strong_gravity = true;
  double jitter_tolerance = 1.0;
};

struct LayoutConfig {
  double ring_spacing = 60.0;
  double min_angular_gap = 0.5 * std::numbers::pi / 180.0;  // radians
  ForceSettings forces;
  std::uint64_t max_iterations = 2000;
  /// Mean displacement per node below which refinement stops.
  double convergence_threshold = 0.1;

  /// Largest displacement any node may take in one force step.
  double max_step() const noexcept;
  /// Throws Error(Parameter) for non-positive spacing and similar.
  void check() const;
};

/// A forest over tokens: `edges` are (parent, child) pairs.
struct LayoutForest {
  std::vector<Token> nodes;
  std::vector<std::pair<Token, Token>> edges;
};

struct TidyTree {
  Positions positions;
  std::map<Token, double> angle;  // [0, 2*pi)
  std::map<Token, std::uint32_t> depth;
  /// Angle between neighbouring leaves; the smallest gap between any two
  /// sibling subtrees. Equals or exceeds min_angular_gap whenever the
  /// number of leaves allows it.
  double leaf_angle = 0.0;
};

/// Radial tidy tree: roots at the centre, every node on the ring of its
/// depth, leaves spread evenly around the circle in token order and each
/// parent centred over its first and last child. Sibling subtrees occupy
/// disjoint angular intervals. Throws Error(Structure) for non-forest input.
TidyTree tidy_tree_layout(const LayoutForest& forest, const LayoutConfig& config);

/// Undirected weighted graph the force model acts on. Node order is token
/// order; links are deduplicated node pairs (a < b).
struct ForceGraph {
  struct Link {
    std::size_t a = 0;
    std::size_t b = 0;
    double weight = 1.0;
  };
  std::vector<Token> nodes;
  std::vector<double> sizes;
  std::vector<Link> links;

  std::vector<double> masses() const;  // degree + 1
};

/// Builds the force graph over `visible` from the enabled relations
/// (declares always included). Sizes come from the glyph radius.
ForceGraph build_force_graph(const EntityGraph& graph, const std::set<Token>& visible,
                             const std::set<RelationId>& relations, const GlyphConfig& glyphs = {});

struct StepStats {
  double swing = 0.0;     // sum of mass * |F_t - F_{t-1}|
  double traction = 0.0;  // sum of mass * |F_t + F_{t-1}| / 2
  double speed = 0.0;
  double mean_displacement = 0.0;
  double max_displacement = 0.0;
};

/// Cached Barnes-Hut interaction lists. Reused across steps while nodes stay
/// close to where the lists were built, which keeps the force field
/// continuous between rebuilds.
struct RepulsionPlan {
  struct Cell {
    std::array<int, 4> child{-1, -1, -1, -1};
    std::vector<std::uint32_t> bodies;
    double mass = 0.0;
  };
  std::vector<Cell> cells;
  std::vector<std::vector<std::uint32_t>> near;  // bodies summed exactly, per node
  std::vector<std::vector<std::uint32_t>> far;   // cells acting as one body, per node
  std::vector<Vec2> anchor;
};

/// Force-model state aligned with a ForceGraph's node order.
struct LayoutState {
  std::vector<Vec2> positions;
  std::vector<Vec2> previous_forces;
  std::set<Token> pinned;
  std::uint64_t iteration = 0;
  std::uint64_t seed = 0;
  LayoutConfig config;
  double speed = 1.0;
  StepStats last;
  std::shared_ptr<const RepulsionPlan> plan;

  static LayoutState start(const ForceGraph& graph, const Positions& initial, const LayoutConfig& config,
                           std::uint64_t seed, std::set<Token> pinned = {});
  Positions to_positions(const ForceGraph& graph) const;
};

/// One iteration of the force model: degree-weighted repulsion with a
/// Barnes-Hut approximation, linear edge attraction, gravity toward the
/// origin and swing-limited adaptive speed. Pinned nodes never move.
LayoutState force_step(LayoutState state, const ForceGraph& graph);

struct LayoutOptions {
  GlyphConfig glyphs;
  /// Previous positions to keep as a warm start; new nodes are seeded on a
  /// small ring around their nearest positioned ancestor.
  const Positions* warm_start = nullptr;
  std::set<Token> pinned;
};

struct LayoutResult {
  Positions positions;
  std::uint64_t iterations = 0;
  bool converged = false;
  StepStats last;
};

/// Initial positions for the visible nodes: the tidy tree over the visible
/// declares forest, with visible nodes outside it on an outer ring at
/// seed-derived angles.
Positions seed_positions(const EntityGraph& graph, const ViewState& view, const LayoutConfig& config,
                         std::uint64_t seed, const Positions* warm_start = nullptr);

/// Seeds positions and refines them until the mean displacement drops to
/// the convergence threshold or max_iterations is reached. Deterministic
/// for fixed inputs.
LayoutResult run_layout(const EntityGraph& graph, const ViewState& view, const LayoutConfig& config,
                        std::uint64_t seed, const LayoutOptions& options = {});

inline constexpr std::string_view kLayoutVersion = "codecarta-layout/1";

std::string layout_snapshot_json(const LayoutResult& result, std::uint64_t seed);
LayoutResult parse_layout_snapshot(std::string_view document);

}  // namespace codecarta
