// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "codecarta/error.hpp"
#include "codecarta/layout.hpp"
#include "../detail/mix.hpp"

namespace codecarta {

namespace {

constexpr double kWarmRing = 0.25;  // fraction of ring spacing

double seeded_angle(std::uint64_t seed, const Token& token) {
  return 2.0 * std::numbers::pi * detail::unit_interval(detail::mix_token(seed, token));
}

}  // namespace

Positions seed_positions(const EntityGraph& graph, const ViewState& view, const LayoutConfig& config,
                         std::uint64_t seed, const Positions* warm_start) {
  config.check();
  const std::set<Token> visible = compute_visible(graph, view);

  // The visible part of the declares forest that hangs off a visible root.
  LayoutForest forest;
  std::set<Token> in_forest;
  for (const Token& t : visible) {
    const auto parent = graph.declaring_parent(t);
    if (!parent) {
      in_forest.insert(t);
      forest.nodes.push_back(t);
    } else if (in_forest.contains(*parent)) {
      in_forest.insert(t);
      forest.nodes.push_back(t);
      forest.edges.emplace_back(*parent, t);
    }
  }
  const TidyTree tree = tidy_tree_layout(forest, config);
  Positions out = tree.positions;

  std::uint32_t max_depth = 0;
  for (const auto& [t, d] : tree.depth) max_depth = std::max(max_depth, d);
  const double outer = (max_depth + 1) * config.ring_spacing;
  for (const Token& t : visible) {
    if (in_forest.contains(t)) continue;
    const double theta = seeded_angle(seed, t);
    out.emplace(t, Vec2{outer * std::cos(theta), outer * std::sin(theta)});
  }

  if (warm_start == nullptr) return out;

  Positions warmed;
  for (const auto& [t, p] : out) {
    if (auto it = warm_start->find(t); it != warm_start->end()) {
      warmed.emplace_hint(warmed.end(), t, it->second);
      continue;
    }
    std::optional<Vec2> anchor;
    for (auto a = graph.declaring_parent(t); a && !anchor; a = graph.declaring_parent(*a)) {
      if (auto it = warm_start->find(*a); it != warm_start->end()) anchor = it->second;
    }
    if (!anchor) {
      warmed.emplace_hint(warmed.end(), t, p);
      continue;
    }
    const double r = kWarmRing * config.ring_spacing;
    const double theta = seeded_angle(seed, t);
    warmed.emplace_hint(warmed.end(), t, Vec2{anchor->x + r * std::cos(theta), anchor->y + r * std::sin(theta)});
  }
  return warmed;
}

LayoutResult run_layout(const EntityGraph& graph, const ViewState& view, const LayoutConfig& config,
                        std::uint64_t seed, const LayoutOptions& options) {
  const Positions initial = seed_positions(graph, view, config, seed, options.warm_start);
  LayoutResult result;
  if (config.max_iterations == 0) {
    result.positions = initial;
    return result;
  }
  const std::set<Token> visible = compute_visible(graph, view);
  const ForceGraph fg = build_force_graph(graph, visible, view.enabled_relations, options.glyphs);
  LayoutState state = LayoutState::start(fg, initial, config, seed, options.pinned);
  while (state.iteration < config.max_iterations) {
    state = force_step(std::move(state), fg);
    if (state.last.mean_displacement <= config.convergence_threshold) {
      result.converged = true;
      break;
    }
  }
  result.positions = state.to_positions(fg);
  result.iterations = state.iteration;
  result.last = state.last;
  return result;
}

std::string layout_snapshot_json(const LayoutResult& result, std::uint64_t seed) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  doc["schemaVersion"] = kLayoutVersion;
  doc["seed"] = seed;
  doc["iteration"] = result.iterations;
  doc["converged"] = result.converged;
  nlohmann::ordered_json positions = nlohmann::ordered_json::object();
  for (const auto& [token, p] : result.positions) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::Validation, "non-finite position for " + render_token(token));
    }
    positions[render_token(token)] = {p.x, p.y};
  }
  doc["positions"] = std::move(positions);
  return doc.dump(1) + "\n";
}

LayoutResult parse_layout_snapshot(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  auto bad = [](const std::string& path, const std::string& what) {
    throw Error(ErrorCode::Validation, path + ": " + what);
  };
  if (!doc.is_object()) bad("", "top level must be an object");
  if (!doc.contains("schemaVersion") || !doc["schemaVersion"].is_string()) bad("/schemaVersion", "expected a string");
  if (doc["schemaVersion"].get<std::string>() != kLayoutVersion) {
    throw Error(ErrorCode::Version, "unsupported layout version '" + doc["schemaVersion"].get<std::string>() + "'");
  }
  LayoutResult out;
  if (!doc.contains("iteration") || !doc["iteration"].is_number_unsigned()) bad("/iteration", "expected a count");
  if (!doc.contains("converged") || !doc["converged"].is_boolean()) bad("/converged", "expected a boolean");
  if (!doc.contains("positions") || !doc["positions"].is_object()) bad("/positions", "expected an object");
  out.iterations = doc["iteration"].get<std::uint64_t>();
  out.converged = doc["converged"].get<bool>();
  for (const auto& [key, value] : doc["positions"].items()) {
    const std::string path = "/positions/" + key;
    Token token;
    try {
      token = parse_token(key);
    } catch (const Error& e) {
      bad(path, e.what());
    }
    if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
      bad(path, "expected [x, y]");
    }
    out.positions.emplace(std::move(token), Vec2{value[0].get<double>(), value[1].get<double>()});
  }
  return out;
}

}  // namespace codecarta
