// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>

#include "codecarta/layout.hpp"
#include "../detail/mix.hpp"

namespace codecarta {

std::vector<double> ForceGraph::masses() const {
  std::vector<double> mass(nodes.size(), 1.0);
  for (const Link& link : links) {
    mass[link.a] += 1.0;
    mass[link.b] += 1.0;
  }
  return mass;
}

ForceGraph build_force_graph(const EntityGraph& graph, const std::set<Token>& visible,
                             const std::set<RelationId>& relations, const GlyphConfig& glyphs) {
  ForceGraph out;
  out.nodes.assign(visible.begin(), visible.end());
  out.sizes.reserve(out.nodes.size());
  for (const Token& t : out.nodes) out.sizes.push_back(node_radius(graph.at(t), glyphs));

  auto index_of = [&](const Token& t) -> std::ptrdiff_t {
    auto it = std::lower_bound(out.nodes.begin(), out.nodes.end(), t);
    if (it == out.nodes.end() || *it != t) return -1;
    return it - out.nodes.begin();
  };
  std::map<std::pair<std::size_t, std::size_t>, double> weights;
  for (RelationId id : kAllRelations) {
    if (id != RelationId::Declares && !relations.contains(id)) continue;
    for (const Edge& edge : graph.relation(id)) {
      const auto a = index_of(edge.source);
      const auto b = index_of(edge.target);
      if (a < 0 || b < 0 || a == b) continue;
      const auto lo = static_cast<std::size_t>(std::min(a, b));
      const auto hi = static_cast<std::size_t>(std::max(a, b));
      weights[{lo, hi}] += 1.0;
    }
  }
  out.links.reserve(weights.size());
  for (const auto& [pair, w] : weights) out.links.push_back({pair.first, pair.second, w});
  return out;
}

LayoutState LayoutState::start(const ForceGraph& graph, const Positions& initial, const LayoutConfig& config,
                               std::uint64_t seed, std::set<Token> pinned) {
  LayoutState state;
  state.positions.reserve(graph.nodes.size());
  for (const Token& t : graph.nodes) {
    auto it = initial.find(t);
    state.positions.push_back(it == initial.end() ? Vec2{} : it->second);
  }
  state.previous_forces.assign(graph.nodes.size(), Vec2{});
  state.pinned = std::move(pinned);
  state.seed = seed;
  state.config = config;
  return state;
}

Positions LayoutState::to_positions(const ForceGraph& graph) const {
  Positions out;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) out.emplace_hint(out.end(), graph.nodes[i], positions[i]);
  return out;
}

namespace {

constexpr double kNodeSpeed = 0.1;
constexpr double kMaxRise = 0.5;
constexpr double kMinSpeed = 1e-9;
constexpr double kOverlapRepulsion = 100.0;
constexpr int kMaxTreeDepth = 48;
// Interaction lists are rebuilt once some node has drifted this fraction of
// the ring spacing away from where the lists were computed.
constexpr double kPlanSlack = 0.5;

struct QuadTree {
  struct Cell {
    double cx = 0, cy = 0, half = 0;
    double mass = 0, mx = 0, my = 0;  // mass and mass-weighted position sums
    std::array<int, 4> child{-1, -1, -1, -1};
    std::vector<std::uint32_t> bodies;  // leaf contents
    bool leaf = true;
  };
  std::vector<Cell> cells;
  const std::vector<Vec2>& pos;
  const std::vector<double>& mass;

  QuadTree(const std::vector<Vec2>& p, const std::vector<double>& m) : pos(p), mass(m) {
    double minx = 0, miny = 0, maxx = 0, maxy = 0;
    if (!p.empty()) {
      minx = maxx = p[0].x;
      miny = maxy = p[0].y;
    }
    for (const Vec2& v : p) {
      minx = std::min(minx, v.x);
      maxx = std::max(maxx, v.x);
      miny = std::min(miny, v.y);
      maxy = std::max(maxy, v.y);
    }
    Cell root;
    root.cx = 0.5 * (minx + maxx);
    root.cy = 0.5 * (miny + maxy);
    root.half = 0.5 * std::max({maxx - minx, maxy - miny, 1e-9}) * 1.0001;
    cells.reserve(p.size() * 2 + 1);
    cells.push_back(std::move(root));
    for (std::size_t i = 0; i < p.size(); ++i) insert(static_cast<std::uint32_t>(i));
  }

  int quadrant(const Cell& c, const Vec2& v) const { return (v.x >= c.cx ? 1 : 0) + (v.y >= c.cy ? 2 : 0); }

  int child_of(int cell, int q) {
    if (cells[cell].child[q] < 0) {
      Cell c;
      const double h = cells[cell].half * 0.5;
      c.half = h;
      c.cx = cells[cell].cx + ((q & 1) ? h : -h);
      c.cy = cells[cell].cy + ((q & 2) ? h : -h);
      cells.push_back(std::move(c));
      cells[cell].child[q] = static_cast<int>(cells.size() - 1);
    }
    return cells[cell].child[q];
  }

  void add_mass(Cell& c, std::uint32_t body) {
    c.mass += mass[body];
    c.mx += mass[body] * pos[body].x;
    c.my += mass[body] * pos[body].y;
  }

  void insert(std::uint32_t body) {
    int cell = 0;
    int depth = 0;
    while (true) {
      add_mass(cells[cell], body);
      if (cells[cell].leaf) {
        if (cells[cell].bodies.empty() || depth >= kMaxTreeDepth) {
          cells[cell].bodies.push_back(body);
          return;
        }
        // Split: push the resident bodies one level down.
        std::vector<std::uint32_t> residents = std::move(cells[cell].bodies);
        cells[cell].bodies.clear();
        cells[cell].leaf = false;
        for (std::uint32_t r : residents) {
          const int ch = child_of(cell, quadrant(cells[cell], pos[r]));
          add_mass(cells[ch], r);
          cells[ch].bodies.push_back(r);
        }
      }
      cell = child_of(cell, quadrant(cells[cell], pos[body]));
      ++depth;
    }
  }
};

double length(double x, double y) { return std::sqrt(x * x + y * y); }

void separate_coincident(LayoutState& state, const ForceGraph& graph) {
  const std::size_t n = state.positions.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto key = [&](std::size_t i) { return std::pair(state.positions[i].x, state.positions[i].y); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ka = key(a);
    const auto kb = key(b);
    return ka != kb ? ka < kb : a < b;
  });
  const double epsilon = 1e-6 * state.config.ring_spacing;
  for (std::size_t k = 1; k < n; ++k) {
    const std::size_t i = order[k];
    if (key(i) != key(order[k - 1])) continue;
    if (state.pinned.contains(graph.nodes[i])) continue;
    const std::uint64_t bits = detail::mix64(detail::mix_token(state.seed, graph.nodes[i]) ^ state.iteration);
    const double theta = 2.0 * std::numbers::pi * detail::unit_interval(bits);
    state.positions[i].x += epsilon * std::cos(theta);
    state.positions[i].y += epsilon * std::sin(theta);
  }
}

bool needs_rebuild(const RepulsionPlan* plan, const std::vector<Vec2>& pos, double ring_spacing) {
  if (plan == nullptr || plan->anchor.size() != pos.size()) return true;
  const double slack = kPlanSlack * ring_spacing;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (length(pos[i].x - plan->anchor[i].x, pos[i].y - plan->anchor[i].y) > slack) return true;
  }
  return false;
}

// Barnes-Hut interaction lists: for every node, the cells far enough away
// to act as a single body and the bodies that must be summed exactly.
std::shared_ptr<const RepulsionPlan> build_plan(const std::vector<Vec2>& pos, const std::vector<double>& mass,
                                                double theta) {
  const QuadTree tree(pos, mass);
  auto plan = std::make_shared<RepulsionPlan>();
  plan->anchor = pos;
  plan->cells.resize(tree.cells.size());
  for (std::size_t c = 0; c < tree.cells.size(); ++c) {
    plan->cells[c].child = tree.cells[c].child;
    plan->cells[c].bodies = tree.cells[c].bodies;
    plan->cells[c].mass = tree.cells[c].mass;
  }
  const std::size_t n = pos.size();
  plan->near.resize(n);
  plan->far.resize(n);
  const double theta2 = theta * theta;
  std::vector<int> stack;
  for (std::size_t i = 0; i < n; ++i) {
    stack.assign(1, 0);
    while (!stack.empty()) {
      const auto c = static_cast<std::size_t>(stack.back());
      stack.pop_back();
      const auto& cell = tree.cells[c];
      if (cell.leaf) {
        for (std::uint32_t j : cell.bodies) {
          if (j != i) plan->near[i].push_back(j);
        }
        continue;
      }
      const bool inside = std::abs(pos[i].x - cell.cx) <= cell.half && std::abs(pos[i].y - cell.cy) <= cell.half;
      const double dx = pos[i].x - cell.mx / cell.mass;
      const double dy = pos[i].y - cell.my / cell.mass;
      const double d2 = dx * dx + dy * dy;
      const double width = 2.0 * cell.half;
      if (!inside && width * width < theta2 * d2) {
        plan->far[i].push_back(static_cast<std::uint32_t>(c));
        continue;
      }
      for (int ch : cell.child) {
        if (ch >= 0) stack.push_back(ch);
      }
    }
  }
  return plan;
}

// Children always follow their parent in cell order, so one reverse sweep
// accumulates every cell.
std::vector<Vec2> centres_of_mass(const RepulsionPlan& plan, const std::vector<Vec2>& pos,
                                  const std::vector<double>& mass) {
  std::vector<Vec2> sum(plan.cells.size());
  for (std::size_t c = plan.cells.size(); c-- > 0;) {
    const auto& cell = plan.cells[c];
    for (std::uint32_t b : cell.bodies) {
      sum[c].x += mass[b] * pos[b].x;
      sum[c].y += mass[b] * pos[b].y;
    }
    for (int ch : cell.child) {
      if (ch < 0) continue;
      sum[c].x += sum[static_cast<std::size_t>(ch)].x;
      sum[c].y += sum[static_cast<std::size_t>(ch)].y;
    }
  }
  for (std::size_t c = 0; c < sum.size(); ++c) {
    sum[c].x /= plan.cells[c].mass;
    sum[c].y /= plan.cells[c].mass;
  }
  return sum;
}

}  // namespace

LayoutState force_step(LayoutState state, const ForceGraph& graph) {
  const std::size_t n = graph.nodes.size();
  const LayoutConfig& cfg = state.config;
  const ForceSettings& fs = cfg.forces;
  if (state.previous_forces.size() != n) state.previous_forces.assign(n, Vec2{});

  std::vector<bool> pinned(n, false);
  for (std::size_t i = 0; i < n; ++i) pinned[i] = state.pinned.contains(graph.nodes[i]);

  separate_coincident(state, graph);
  const std::vector<double> mass = graph.masses();
  const auto& pos = state.positions;
  std::vector<Vec2> force(n);

  // Repulsion.
  if (fs.repulsion_strength > 0.0 && n > 1) {
    if (needs_rebuild(state.plan.get(), pos, cfg.ring_spacing)) {
      state.plan = build_plan(pos, mass, fs.theta_approx);
    }
    const RepulsionPlan& plan = *state.plan;
    const std::vector<Vec2> com = centres_of_mass(plan, pos, mass);
    // Every approximated interaction acts on both sides at half strength:
    // the node directly, the far cell as a mass-weighted reaction pushed
    // down to its bodies. This keeps the field the gradient of one energy
    // for a fixed plan, so the step loop can settle.
    std::vector<Vec2> reaction(plan.cells.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::uint32_t j : plan.near[i]) {
        const double dx = pos[i].x - pos[j].x;
        const double dy = pos[i].y - pos[j].y;
        const double d = length(dx, dy);
        if (d <= 0.0) continue;
        double f;
        if (fs.adjust_sizes) {
          const double gap = d - graph.sizes[i] - graph.sizes[j];
          f = gap > 0.0 ? fs.repulsion_strength * mass[i] * mass[j] / gap
                        : kOverlapRepulsion * fs.repulsion_strength * mass[i] * mass[j];
        } else {
          f = fs.repulsion_strength * mass[i] * mass[j] / d;
        }
        const double fx = 0.5 * dx / d * f;
        const double fy = 0.5 * dy / d * f;
        force[i].x += fx;
        force[i].y += fy;
        force[j].x -= fx;
        force[j].y -= fy;
      }
      for (std::uint32_t c : plan.far[i]) {
        const double dx = pos[i].x - com[c].x;
        const double dy = pos[i].y - com[c].y;
        const double d2 = dx * dx + dy * dy;
        if (d2 <= 0.0) continue;
        const double f = 0.5 * fs.repulsion_strength * mass[i] * plan.cells[c].mass / d2;
        force[i].x += dx * f;
        force[i].y += dy * f;
        reaction[c].x -= dx * f / plan.cells[c].mass;
        reaction[c].y -= dy * f / plan.cells[c].mass;
      }
    }
    for (std::size_t c = 0; c < plan.cells.size(); ++c) {
      for (int ch : plan.cells[c].child) {
        if (ch < 0) continue;
        reaction[static_cast<std::size_t>(ch)].x += reaction[c].x;
        reaction[static_cast<std::size_t>(ch)].y += reaction[c].y;
      }
      for (std::uint32_t b : plan.cells[c].bodies) {
        force[b].x += mass[b] * reaction[c].x;
        force[b].y += mass[b] * reaction[c].y;
      }
    }
  }

  // Attraction along links.
  for (const auto& link : graph.links) {
    const double dx = pos[link.a].x - pos[link.b].x;
    const double dy = pos[link.a].y - pos[link.b].y;
    double factor = std::pow(link.weight, fs.edge_weight_influence);
    if (fs.adjust_sizes) {
      const double d = length(dx, dy);
      const double gap = d - graph.sizes[link.a] - graph.sizes[link.b];
      if (gap <= 0.0 || d <= 0.0) continue;
      factor *= gap / d;
    }
    force[link.a].x -= dx * factor;
    force[link.a].y -= dy * factor;
    force[link.b].x += dx * factor;
    force[link.b].y += dy * factor;
  }

  // Gravity toward the origin.
  if (fs.gravity > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = length(pos[i].x, pos[i].y);
      if (d <= 0.0) continue;
      const double f = fs.strong_gravity ? fs.gravity * mass[i] : fs.gravity * mass[i] / d;
      force[i].x -= pos[i].x * f;
      force[i].y -= pos[i].y * f;
    }
  }

  // Adaptive speed: the global speed follows tolerance * traction / swing
  // but may rise by at most half per step; each node is slowed further by
  // its own swing.
  std::vector<double> swing(n, 0.0);
  double total_swing = 0.0;
  double total_traction = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pinned[i]) continue;
    const Vec2& prev = state.previous_forces[i];
    swing[i] = length(force[i].x - prev.x, force[i].y - prev.y);
    total_swing += mass[i] * swing[i];
    total_traction += mass[i] * 0.5 * length(force[i].x + prev.x, force[i].y + prev.y);
  }
  const double target = total_swing > 0.0 ? fs.jitter_tolerance * total_traction / total_swing
                                           : std::numeric_limits<double>::infinity();
  state.speed = std::max(kMinSpeed, state.speed + std::min(target - state.speed, kMaxRise * state.speed));

  const double cap = cfg.max_step();
  double total_displacement = 0.0;
  double max_displacement = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pinned[i]) continue;
    const double f = length(force[i].x, force[i].y);
    if (f <= 0.0 || !std::isfinite(f)) continue;
    double factor = kNodeSpeed * state.speed / (1.0 + state.speed * std::sqrt(swing[i]));
    factor = std::min(factor, cap / f);
    const double dx = force[i].x * factor;
    const double dy = force[i].y * factor;
    state.positions[i].x += dx;
    state.positions[i].y += dy;
    const double moved = length(dx, dy);
    total_displacement += moved;
    max_displacement = std::max(max_displacement, moved);
  }

  state.previous_forces = std::move(force);
  state.iteration += 1;
  state.last.swing = total_swing;
  state.last.traction = total_traction;
  state.last.speed = state.speed;
  state.last.mean_displacement = n > 0 ? total_displacement / static_cast<double>(n) : 0.0;
  state.last.max_displacement = max_displacement;
  return state;
}

}  // namespace codecarta
