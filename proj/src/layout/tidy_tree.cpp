// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "codecarta/error.hpp"
#include "codecarta/layout.hpp"

namespace codecarta {

double LayoutConfig::max_step() const noexcept { return std::min(10.0, 0.5 * ring_spacing); }

void LayoutConfig::check() const {
  if (!(ring_spacing > 0.0) || !std::isfinite(ring_spacing)) {
    throw Error(ErrorCode::Parameter, "ringSpacing must be positive");
  }
  if (!(min_angular_gap >= 0.0)) throw Error(ErrorCode::Parameter, "minAngularGap must be non-negative");
  if (!(forces.repulsion_strength >= 0.0) || !(forces.gravity >= 0.0)) {
    throw Error(ErrorCode::Parameter, "force strengths must be non-negative");
  }
  if (!(forces.theta_approx >= 0.0)) throw Error(ErrorCode::Parameter, "thetaApprox must be non-negative");
  if (!(forces.jitter_tolerance > 0.0)) throw Error(ErrorCode::Parameter, "jitterTolerance must be positive");
  if (!(convergence_threshold >= 0.0)) {
    throw Error(ErrorCode::Parameter, "convergenceThreshold must be non-negative");
  }
}

TidyTree tidy_tree_layout(const LayoutForest& forest, const LayoutConfig& config) {
  config.check();
  std::vector<Token> nodes = forest.nodes;
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw Error(ErrorCode::Structure, "duplicate node in layout forest");
  }
  auto index_of = [&](const Token& t) -> std::size_t {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t);
    if (it == nodes.end() || *it != t) {
      throw Error(ErrorCode::Structure, "layout forest edge references unknown node " + render_token(t));
    }
    return static_cast<std::size_t>(it - nodes.begin());
  };

  const std::size_t n = nodes.size();
  std::vector<std::vector<std::size_t>> kids(n);
  std::vector<std::ptrdiff_t> parent(n, -1);
  for (const auto& [p, c] : forest.edges) {
    const std::size_t pi = index_of(p);
    const std::size_t ci = index_of(c);
    if (parent[ci] >= 0 || pi == ci) {
      throw Error(ErrorCode::Structure, "layout input is not a tree at " + render_token(c));
    }
    parent[ci] = static_cast<std::ptrdiff_t>(pi);
    kids[pi].push_back(ci);
  }
  // Node indices follow token order, so sorting children by index sorts
  // them by token.
  for (auto& k : kids) std::sort(k.begin(), k.end());

  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (parent[i] < 0) roots.push_back(i);
  }

  // Pre-order to fix depths, then reverse pre-order so every child is
  // placed before its parent. Leaves take consecutive slots.
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<std::uint32_t> depth(n, 0);
  std::vector<std::size_t> stack(roots.rbegin(), roots.rend());
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) {
      depth[*it] = depth[v] + 1;
      stack.push_back(*it);
    }
  }
  if (order.size() != n) throw Error(ErrorCode::Structure, "layout input contains a cycle");

  std::vector<double> slot(n, 0.0);
  double leaves = 0.0;
  for (std::size_t v : order) {
    if (kids[v].empty()) slot[v] = leaves++;
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t v = *it;
    if (!kids[v].empty()) slot[v] = 0.5 * (slot[kids[v].front()] + slot[kids[v].back()]);
  }

  TidyTree out;
  out.leaf_angle = leaves > 0.0 ? 2.0 * std::numbers::pi / leaves : 2.0 * std::numbers::pi;
  for (std::size_t v = 0; v < n; ++v) {
    const double theta = slot[v] * out.leaf_angle;
    const double radius = depth[v] * config.ring_spacing;
    out.angle.emplace_hint(out.angle.end(), nodes[v], theta);
    out.depth.emplace_hint(out.depth.end(), nodes[v], depth[v]);
    out.positions.emplace_hint(out.positions.end(), nodes[v],
                               Vec2{radius * std::cos(theta), radius * std::sin(theta)});
  }
  return out;
}

}  // namespace codecarta
