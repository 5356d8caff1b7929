// SPDX-License-Identifier: Apache-2.0
#include "properties.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include "codecarta/error.hpp"
#include "codecarta/glyph.hpp"
#include "codecarta/serializer.hpp"
#include "codecarta/token.hpp"
#include "codecarta/view_model.hpp"
#include "expr_oracle.hpp"
#include "mini_regex.hpp"
#include "random_graph.hpp"

namespace testsupport {

using namespace codecarta;

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string describe(const std::set<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) out += (out.empty() ? "" : " ") + render_token(t);
  return "{" + out + "}";
}

bool string_prefix_ancestor(const Token& a, const Token& b) {
  return render_token(b).starts_with(render_token(a) + ".");
}

// ---- tokens ---------------------------------------------------------------

using SortKey = std::tuple<int, std::string, std::string, int>;

SortKey sort_key(const ForestNode& n) {
  return {kind_rank(n.kind), n.name, n.disambiguator, static_cast<int>(n.kind)};
}

std::vector<ForestNode> random_forest(std::mt19937_64& rng, std::size_t n) {
  constexpr std::array names = {"a", "A", "b", "Map", "map", "run", "Z", "é", "x1"};
  std::vector<ForestNode> nodes;
  std::map<std::optional<std::size_t>, std::set<SortKey>> used;
  for (std::size_t i = 0; i < n; ++i) {
    ForestNode node;
    if (i > 0 && !chance(rng, 0.08)) node.parent = pick(rng, i);
    node.kind = kAllEntityKinds[pick(rng, kAllEntityKinds.size())];
    node.name = names[pick(rng, names.size())];
    if (chance(rng, 0.2)) node.disambiguator = "(" + std::to_string(pick(rng, 3)) + ")";
    for (int k = 0; !used[node.parent].insert(sort_key(node)).second; ++k) node.disambiguator = "#" + std::to_string(k);
    nodes.push_back(std::move(node));
  }
  return nodes;
}

void check_forest(std::mt19937_64& rng, const std::vector<ForestNode>& nodes, PropertyOutcome& out) {
  const std::size_t n = nodes.size();
  const std::vector<Token> tokens = assign_tokens(nodes);
  if (tokens.size() != n) return out.fail("token count differs from node count");
  if (std::set<Token>(tokens.begin(), tokens.end()).size() != n) return out.fail("duplicate tokens");

  std::map<std::optional<std::size_t>, std::vector<std::size_t>> kids;
  for (std::size_t i = 0; i < n; ++i) {
    kids[nodes[i].parent].push_back(i);
    if (nodes[i].parent) {
      if (tokens[i].parent() != tokens[*nodes[i].parent]) return out.fail("token parent mismatch at node " + std::to_string(i));
    } else if (!tokens[i].is_root()) {
      return out.fail("root with a multi-level token");
    }
  }
  for (auto& [parent, list] : kids) {
    std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) { return sort_key(nodes[a]) < sort_key(nodes[b]); });
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (tokens[list[k]].path().back() != k) return out.fail("sibling ordinal does not follow the sibling key");
    }
  }

  // Pre-order under the sibling sort equals token order.
  std::vector<Token> preorder;
  std::vector<std::size_t> stack(kids[std::nullopt].rbegin(), kids[std::nullopt].rend());
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    preorder.push_back(tokens[v]);
    const auto& ch = kids[v];
    stack.insert(stack.end(), ch.rbegin(), ch.rend());
  }
  if (!std::is_sorted(preorder.begin(), preorder.end()) || preorder.size() != n) {
    return out.fail("token order differs from pre-order traversal");
  }

  // Same structure, different discovery order.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::size_t> where(n);
  for (std::size_t i = 0; i < n; ++i) where[perm[i]] = i;
  std::vector<ForestNode> shuffled(n);
  for (std::size_t i = 0; i < n; ++i) {
    shuffled[where[i]] = nodes[i];
    if (nodes[i].parent) shuffled[where[i]].parent = where[*nodes[i].parent];
  }
  const std::vector<Token> again = assign_tokens(shuffled);
  for (std::size_t i = 0; i < n; ++i) {
    if (again[where[i]] != tokens[i]) return out.fail("tokens depend on discovery order");
  }

  for (int k = 0; k < 40; ++k) {
    const Token& a = tokens[pick(rng, n)];
    const Token& b = tokens[pick(rng, n)];
    if (is_ancestor(a, b) != string_prefix_ancestor(a, b)) {
      return out.fail("is_ancestor(" + render_token(a) + ", " + render_token(b) + ") disagrees with the prefix oracle");
    }
    if (auto p = b.parent(); p && !is_ancestor(*p, b)) return out.fail("parent is not an ancestor");
  }
  for (const Token& t : tokens) {
    if (parse_token(render_token(t)) != t) return out.fail("round trip failed for " + render_token(t));
  }
}

Token random_token(std::mt19937_64& rng) {
  std::vector<std::uint32_t> path(1 + pick(rng, 6));
  for (auto& p : path) {
    p = chance(rng, 0.1) ? static_cast<std::uint32_t>(rng()) : static_cast<std::uint32_t>(pick(rng, 3));
  }
  return Token(std::move(path));
}

// ---- layout -------------------------------------------------------------

LayoutForest random_layout_forest(std::mt19937_64& rng, std::size_t n) {
  LayoutForest f;
  std::vector<std::uint32_t> child_count;
  const std::size_t roots = 1 + pick(rng, 3);
  std::uint32_t next_root = 0;
  const double locality = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < roots) {
      f.nodes.push_back(Token{next_root++});
    } else {
      // Mixing uniform and recent parents yields both bushy and deep trees.
      const std::size_t p = chance(rng, locality) ? i - 1 - pick(rng, std::min<std::size_t>(i, 4)) : pick(rng, i);
      f.nodes.push_back(f.nodes[p].child(child_count[p]++));
      f.edges.emplace_back(f.nodes[p], f.nodes.back());
    }
    child_count.push_back(0);
  }
  std::shuffle(f.nodes.begin(), f.nodes.end(), rng);
  return f;
}

void check_tidy(const LayoutForest& forest, const LayoutConfig& cfg, PropertyOutcome& out) {
  const TidyTree tree = tidy_tree_layout(forest, cfg);
  std::map<Token, std::vector<Token>> kids;
  std::vector<Token> roots;
  for (const auto& [p, c] : forest.edges) kids[p].push_back(c);
  for (auto& [p, list] : kids) std::sort(list.begin(), list.end());
  for (const Token& t : forest.nodes) {
    if (t.is_root()) roots.push_back(t);
  }
  std::sort(roots.begin(), roots.end());

  for (const Token& t : forest.nodes) {
    const auto depth = static_cast<std::uint32_t>(t.depth() - 1);
    if (tree.depth.at(t) != depth) return out.fail("depth of " + render_token(t));
    const Vec2 p = tree.positions.at(t);
    const double r = std::hypot(p.x, p.y);
    const double ring = depth * cfg.ring_spacing;
    if (std::abs(r - ring) > 1e-9 * std::max(1.0, ring)) {
      return out.fail("node " + render_token(t) + " off its ring: " + std::to_string(r) + " vs " + std::to_string(ring));
    }
    const double a = tree.angle.at(t);
    if (!(a >= 0.0 && a < 2.0 * std::numbers::pi)) return out.fail("angle outside [0, 2pi)");
  }

  // Angular extent of each subtree, children before parents.
  std::map<Token, std::pair<double, double>> span;
  std::vector<Token> order(forest.nodes);
  std::sort(order.begin(), order.end());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const double a = tree.angle.at(*it);
    std::pair<double, double> s{a, a};
    const auto k = kids.find(*it);
    for (const Token& c : k == kids.end() ? std::vector<Token>{} : k->second) {
      s.first = std::min(s.first, span.at(c).first);
      s.second = std::max(s.second, span.at(c).second);
    }
    span[*it] = s;
  }
  const double gap = tree.leaf_angle * (1.0 - 1e-9);
  auto disjoint = [&](const std::vector<Token>& siblings) {
    for (std::size_t k = 1; k < siblings.size(); ++k) {
      if (span.at(siblings[k - 1]).second + gap > span.at(siblings[k]).first) return false;
    }
    return true;
  };
  if (!disjoint(roots)) return out.fail("root subtrees overlap");
  for (const auto& [p, list] : kids) {
    if (!disjoint(list)) return out.fail("sibling subtrees under " + render_token(p) + " overlap");
    const double a = tree.angle.at(p);
    if (a < tree.angle.at(list.front()) - 1e-12 || a > tree.angle.at(list.back()) + 1e-12) {
      return out.fail("parent " + render_token(p) + " outside its children's span");
    }
  }
  std::size_t leaves = 0;
  for (const Token& t : forest.nodes) leaves += kids.find(t) == kids.end();
  if (std::floor(2.0 * std::numbers::pi / cfg.min_angular_gap) >= static_cast<double>(leaves) &&
      tree.leaf_angle < cfg.min_angular_gap) {
    return out.fail("leaf gap below minAngularGap although the leaves fit");
  }
}

// ---- view model ------------------------------------------------------------

std::vector<Token> prefixes(const Token& t) {
  std::vector<Token> out;
  for (std::size_t k = 1; k < t.depth(); ++k) {
    out.emplace_back(std::vector<std::uint32_t>(t.path().begin(), t.path().begin() + static_cast<std::ptrdiff_t>(k)));
  }
  return out;
}

std::set<Token> visible_by_definition(const EntityGraph& g, const ViewState& s) {
  std::set<Token> out;
  for (const auto& [t, e] : g.entities()) {
    if (!s.enabled_kinds.contains(e.kind) || s.removed.contains(t)) continue;
    const auto pre = prefixes(t);
    if (std::all_of(pre.begin(), pre.end(), [&](const Token& p) { return s.expanded.contains(p) && !s.removed.contains(p); })) {
      out.insert(t);
    }
  }
  return out;
}

template <typename Set>
const Token& pick_from(std::mt19937_64& rng, const Set& set) {
  return *std::next(set.begin(), static_cast<std::ptrdiff_t>(pick(rng, set.size())));
}

ViewState random_view(std::mt19937_64& rng, const EntityGraph& g) {
  ViewState s = chance(rng, 0.5) ? full_view(g) : default_view(g);
  const std::size_t ops = pick(rng, 12);
  for (std::size_t k = 0; k < ops && !s.visible.empty(); ++k) {
    const Token t = pick_from(rng, s.visible);
    if (chance(rng, 0.7)) {
      s = toggle_expand(g, s, t);
    } else if (s.visible.size() > 3) {
      s = remove(g, s, t);
    }
  }
  if (chance(rng, 0.2)) s = set_kind_enabled(g, s, kAllEntityKinds[1 + pick(rng, kAllEntityKinds.size() - 1)], false);
  return s;
}

// ---- glyphs ----------------------------------------------------------------

bool is_hex_color(const std::string& s) {
  return s.size() == 7 && s[0] == '#' &&
         std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || (c >= 'a' && c <= 'f'); });
}

}  // namespace

PropertyOutcome check_token_forests(std::uint64_t seed, std::size_t forests) {
  std::mt19937_64 rng(seed);
  PropertyOutcome out;
  for (std::size_t f = 0; f < forests; ++f) {
    ++out.trials;
    const std::size_t n = 1 + pick(rng, chance(rng, 0.05) ? 600 : 60);
    std::vector<ForestNode> nodes = random_forest(rng, n);
    try {
      check_forest(rng, nodes, out);
      if (n > 1 && f % 10 == 0) {
        // A planted duplicate sibling must be rejected.
        const std::size_t victim = 1 + pick(rng, n - 1);
        nodes.push_back(nodes[victim]);
        bool rejected = false;
        try {
          assign_tokens(nodes);
        } catch (const Error& e) {
          rejected = e.code() == ErrorCode::Ambiguity;
        }
        if (!rejected) out.fail("duplicate sibling accepted");
      }
    } catch (const std::exception& e) {
      out.fail(std::string("unexpected error: ") + e.what());
    }
    for (int k = 0; k < 10; ++k) {
      const Token a = random_token(rng);
      const Token b = chance(rng, 0.5) ? a.child(static_cast<std::uint32_t>(pick(rng, 3))).child(0) : random_token(rng);
      if (is_ancestor(a, b) != string_prefix_ancestor(a, b)) out.fail("random pair disagrees with the prefix oracle");
      if (parse_token(render_token(b)) != b) out.fail("round trip failed for " + render_token(b));
    }
  }
  return out;
}

PropertyOutcome check_serializer_round_trip(std::uint64_t seed, std::size_t graphs, std::size_t max_nodes) {
  std::mt19937_64 rng(seed);
  PropertyOutcome out;
  for (std::size_t k = 0; k < graphs; ++k) {
    ++out.trials;
    RandomGraphOptions opt;
    opt.max_nodes = k % 100 == 99 ? 1000 : max_nodes;
    opt.relation_density = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    const EntityGraph g = random_graph(rng, opt);
    try {
      const std::string doc = serialize(g);
      const EntityGraph back = deserialize(doc);
      if (!(back == g)) {
        out.fail("graph " + std::to_string(k) + " changed in a round trip");
      } else if (serialize(back) != doc) {
        out.fail("graph " + std::to_string(k) + " re-serialised differently");
      }
    } catch (const std::exception& e) {
      out.fail(std::string("unexpected error: ") + e.what());
    }
  }
  return out;
}

PropertyOutcome check_tidy_trees(std::uint64_t seed, std::size_t trees, std::size_t max_nodes) {
  std::mt19937_64 rng(seed);
  PropertyOutcome out;
  LayoutConfig cfg;
  for (std::size_t k = 0; k < trees; ++k) {
    ++out.trials;
    const std::size_t n = k % 10 == 0 ? max_nodes : 1 + pick(rng, max_nodes);
    cfg.ring_spacing = chance(rng, 0.5) ? 60.0 : std::uniform_real_distribution<double>(1.0, 200.0)(rng);
    try {
      check_tidy(random_layout_forest(rng, n), cfg, out);
    } catch (const std::exception& e) {
      out.fail(std::string("unexpected error: ") + e.what());
    }
  }
  return out;
}

double two_node_equilibrium_oracle(const ForceSettings& fs) {
  // Each node has degree 1, so mass 2, and sits at d/2 from the origin.
  const double m = 2.0;
  auto net_outward = [&](double d) {
    const double repulsion = fs.repulsion_strength * m * m / d;
    const double attraction = d;
    const double gravity = fs.strong_gravity ? fs.gravity * m * (d / 2.0) : fs.gravity * m;
    return repulsion - attraction - gravity;
  };
  double lo = 1e-9, hi = 1e6;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (net_outward(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double EquilibriumOutcome::relative_error() const { return std::abs(measured - oracle) / oracle; }

EquilibriumOutcome two_node_equilibrium(const LayoutConfig& config) {
  ForceGraph graph;
  graph.nodes = {Token{0}, Token{1}};
  graph.sizes = {5.0, 5.0};
  graph.links = {{0, 1, 1.0}};
  LayoutState state = LayoutState::start(graph, {{Token{0}, {-30.0, 0.0}}, {Token{1}, {40.0, 5.0}}}, config, 1);
  EquilibriumOutcome out;
  out.oracle = two_node_equilibrium_oracle(config.forces);
  for (int k = 0; k < 200000; ++k) {
    state = force_step(std::move(state), graph);
    if (state.iteration > 10 && state.last.max_displacement < 1e-10) break;
  }
  out.iterations = state.iteration;
  out.measured = std::hypot(state.positions[0].x - state.positions[1].x, state.positions[0].y - state.positions[1].y);
  return out;
}

PropertyOutcome check_pinned_immobility(std::uint64_t seed, std::size_t configs) {
  std::mt19937_64 rng(seed);
  PropertyOutcome out;
  std::uniform_real_distribution<double> coord(-300.0, 300.0);
  for (std::size_t k = 0; k < configs; ++k) {
    ++out.trials;
    RandomGraphOptions opt;
    opt.max_nodes = 10 + pick(rng, 70);
    opt.decorate = false;
    const EntityGraph g = random_graph(rng, opt);
    const ForceGraph fg = build_force_graph(g, full_view(g).visible, {kAllRelations.begin(), kAllRelations.end()});
    Positions initial;
    for (const Token& t : fg.nodes) {
      // Some nodes share a position so the jitter path is exercised too.
      initial[t] = chance(rng, 0.1) && !initial.empty() ? initial.begin()->second : Vec2{coord(rng), coord(rng)};
    }
    const double p = std::array{0.0, 0.3, 0.7, 1.0}[pick(rng, 4)];
    std::set<Token> pinned;
    for (const Token& t : fg.nodes) {
      if (chance(rng, p)) pinned.insert(t);
    }
    LayoutConfig cfg;
    cfg.forces.theta_approx = chance(rng, 0.5) ? 0.0 : 1.2;
    cfg.forces.strong_gravity = chance(rng, 0.5);
    cfg.forces.adjust_sizes = chance(rng, 0.2);
    LayoutState state = LayoutState::start(fg, initial, cfg, k, pinned);
    const std::size_t steps = 1 + pick(rng, 25);
    for (std::size_t s = 0; s < steps; ++s) {
      state = force_step(std::move(state), fg);
      if (!(state.last.max_displacement < cfg.ring_spacing)) out.fail("a step moved a node a full ring");
    }
    for (std::size_t i = 0; i < fg.nodes.size(); ++i) {
      if (pinned.contains(fg.nodes[i]) && !(state.positions[i] == initial.at(fg.nodes[i]))) {
        out.fail("pinned node " + render_token(fg.nodes[i]) + " moved");
        break;
      }
      if (!std::isfinite(state.positions[i].x) || !std::isfinite(state.positions[i].y)) {
        out.fail("non-finite position");
        break;
      }
    }
  }
  return out;
}

SwingOutcome swing_windows(std::uint64_t seed, std::size_t fixtures, std::size_t iterations) {
  constexpr std::size_t kWindow = 50;
  constexpr double kFloor = 1e-9;
  std::mt19937_64 rng(seed);
  SwingOutcome out;
  for (std::size_t f = 0; f < fixtures; ++f) {
    const EntityGraph g = random_graph(rng);
    const ViewState view = full_view(g);
    LayoutConfig cfg;
    const ForceGraph fg = build_force_graph(g, view.visible, view.enabled_relations);
    LayoutState state = LayoutState::start(fg, seed_positions(g, view, cfg, f), cfg, f);
    std::vector<double> sums;
    double first = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < iterations; ++k) {
      state = force_step(std::move(state), fg);
      if (k == 0) first = state.last.swing;
      sum += state.last.swing;
      if ((k + 1) % kWindow == 0) {
        sums.push_back(sum);
        sum = 0.0;
      }
    }
    for (std::size_t w = 1; w < sums.size(); ++w) {
      ++out.windows;
      if (sums[w] <= sums[w - 1] || sums[w] <= kWindow * kFloor * first) ++out.non_increasing;
    }
  }
  return out;
}

PropertyOutcome check_filter_oracle(std::uint64_t seed, QueryMode mode, std::size_t pairs) {
  std::mt19937_64 rng(seed);
  PropertyOutcome out;
  for (std::size_t k = 0; k < pairs; ++k) {
    ++out.trials;
    RandomGraphOptions opt;
    opt.max_nodes = 20 + pick(rng, 200);
    const EntityGraph g = random_graph(rng, opt);
    std::set<Token> scope;
    const double keep = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
    for (const auto& [t, e] : g.entities()) {
      if (chance(rng, keep)) scope.insert(t);
    }
    if (chance(rng, 0.2)) scope.insert(Token{99, 1});  // outside the graph, ignored

    Query q{mode, {}};
    std::function<std::optional<bool>(const Entity&)> oracle;
    std::optional<MiniRegex> rx;
    std::optional<Expr> expr;
    switch (mode) {
      case QueryMode::FullText: {
        const Entity& e = std::next(g.entities().begin(), static_cast<std::ptrdiff_t>(pick(rng, g.size())))->second;
        if (chance(rng, 0.7) && !e.name.empty()) {
          const std::size_t from = pick(rng, e.name.size());
          q.source = e.name.substr(from, 1 + pick(rng, e.name.size() - from));
          for (char& c : q.source) {
            if (chance(rng, 0.5) && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
          }
        } else {
          q.source = std::array{"a", "NODE", "ue", "x", "Écr", "ph"}[pick(rng, 6)];
        }
        if (std::all_of(q.source.begin(), q.source.end(), [](unsigned char c) { return std::isspace(c); })) q.source = "a";
        const std::string needle = q.source;
        oracle = [needle](const Entity& e) -> std::optional<bool> {
          auto fold = [](char c) { return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c; };
          for (std::size_t i = 0; i + needle.size() <= e.name.size(); ++i) {
            bool same = true;
            for (std::size_t j = 0; j < needle.size() && same; ++j) same = fold(e.name[i + j]) == fold(needle[j]);
            if (same) return true;
          }
          return false;
        };
        break;
      }
      case QueryMode::Regex:
        rx = random_regex(rng, "AaGgNnodeRruVvlphz", 2);
        q.source = rx->text();
        oracle = [&rx](const Entity& e) -> std::optional<bool> { return rx->search(e.name); };
        break;
      case QueryMode::Expression:
        expr = random_expression(rng, 3);
        q.source = expr->text();
        oracle = [&expr](const Entity& e) { return reference_eval(*expr, e); };
        break;
    }

    try {
      const Evaluation got = evaluate(compile_query(q), g, scope);
      std::set<Token> want;
      std::size_t failures = 0;
      for (const Token& t : scope) {
        const Entity* e = g.find(t);
        if (e == nullptr) continue;
        const auto r = oracle(*e);
        if (!r) ++failures;
        if (r.value_or(false)) want.insert(t);
      }
      if (got.matches != want) {
        out.fail(std::string(to_string(mode)) + " query '" + q.source + "' matched " + describe(got.matches) +
                 ", expected " + describe(want));
      } else if (got.failures != failures || got.error.has_value() != (failures > 0)) {
        out.fail("query '" + q.source + "' reported " + std::to_string(got.failures) + " failures, expected " +
                 std::to_string(failures));
      }
    } catch (const std::exception& e) {
      out.fail(std::string(to_string(mode)) + " query '" + q.source + "' raised: " + e.what());
    }
  }
  return out;
}

PropertyOutcome check_isolate_closure(std::uint64_t seed, std::size_t trials) {
  std::mt19937_64 rng(seed);
  PropertyOutcome out;
  for (std::size_t k = 0; k < trials; ++k) {
    ++out.trials;
    RandomGraphOptions opt;
    opt.max_nodes = 20 + pick(rng, 150);
    opt.decorate = false;
    const EntityGraph g = random_graph(rng, opt);
    const ViewState before = random_view(rng, g);
    if (before.visible.empty()) continue;

    // Favour deep nodes, then add a few tokens that are not visible.
    std::vector<Token> by_depth(before.visible.begin(), before.visible.end());
    std::stable_sort(by_depth.begin(), by_depth.end(), [](const Token& a, const Token& b) { return a.depth() > b.depth(); });
    std::set<Token> matches;
    const std::size_t count = 1 + pick(rng, 5);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t span = chance(rng, 0.6) ? std::min<std::size_t>(by_depth.size(), 8) : by_depth.size();
      matches.insert(by_depth[pick(rng, span)]);
    }
    std::set<Token> hidden_hits;
    for (const auto& [t, e] : g.entities()) {
      if (!before.visible.contains(t) && chance(rng, 0.05)) hidden_hits.insert(t);
    }
    std::set<Token> query = matches;
    query.insert(hidden_hits.begin(), hidden_hits.end());

    std::set<Token> want = matches;
    for (const Token& v : before.visible) {
      for (const Token& m : matches) {
        if (string_prefix_ancestor(v, m)) want.insert(v);
      }
    }
    const ViewState isolated = apply(g, query, MatchAction::Isolate, before);
    if (isolated.visible != want) {
      out.fail("isolate kept " + describe(isolated.visible) + ", expected " + describe(want));
      continue;
    }
    if (isolated.visible != compute_visible(g, isolated)) out.fail("isolate left an inconsistent visible set");
    if (!std::includes(isolated.removed.begin(), isolated.removed.end(), before.removed.begin(), before.removed.end())) {
      out.fail("isolate dropped earlier removals");
    }
    const ViewState highlighted = apply(g, query, MatchAction::Highlight, before);
    if (highlighted.visible != before.visible || highlighted.highlighted != matches) {
      out.fail("highlight changed visibility or marked hidden nodes");
    }
  }
  return out;
}

PropertyOutcome check_view_sequences(std::uint64_t seed, std::size_t sequences, std::size_t steps) {
  std::mt19937_64 rng(seed);
  PropertyOutcome out;
  for (std::size_t k = 0; k < sequences; ++k) {
    ++out.trials;
    RandomGraphOptions opt;
    opt.max_nodes = 10 + pick(rng, 150);
    opt.decorate = false;
    const EntityGraph g = random_graph(rng, opt);
    ViewState s = chance(rng, 0.7) ? default_view(g) : full_view(g);
    std::set<Token> removed_since_refresh;
    std::string trace;
    try {
      for (std::size_t step = 0; step < steps; ++step) {
        const std::size_t op = pick(rng, 20);
        if (op < 11 && !s.visible.empty()) {
          const Token t = pick_from(rng, s.visible);
          trace += " toggle " + render_token(t);
          const ViewState prior = s;
          s = toggle_expand(g, s, t);
          if (chance(rng, 0.2)) {
            s = toggle_expand(g, s, t);
            if (s != prior) throw std::runtime_error("toggling twice is not an involution");
          }
        } else if (op < 14 && !s.visible.empty()) {
          const Token t = pick_from(rng, s.visible);
          trace += " remove " + render_token(t);
          s = remove(g, s, t);
          removed_since_refresh.insert(t);
        } else if (op == 14) {
          trace += " refresh";
          s = refresh(s, g);
          removed_since_refresh.clear();
          if (!s.removed.empty()) throw std::runtime_error("refresh kept removals");
        } else if (op < 17) {
          const EntityKind kind = kAllEntityKinds[pick(rng, kAllEntityKinds.size())];
          const bool on = chance(rng, 0.6);
          trace += std::string(on ? " enable " : " disable ") + std::string(to_string(kind));
          s = set_kind_enabled(g, s, kind, on);
        } else if (op < 19) {
          const RelationId r = kAllRelations[pick(rng, kAllRelations.size())];
          s = set_relation_enabled(s, r, chance(rng, 0.5));
          if (!s.enabled_relations.contains(RelationId::Declares)) throw std::runtime_error("declares disabled");
        } else {
          // Toggling a hidden node is a state error and leaves the view alone.
          std::vector<Token> hidden;
          for (const auto& [t, e] : g.entities()) {
            if (!s.visible.contains(t)) hidden.push_back(t);
          }
          if (hidden.empty()) continue;
          const Token t = hidden[pick(rng, hidden.size())];
          bool rejected = false;
          try {
            toggle_expand(g, s, t);
          } catch (const Error& e) {
            rejected = e.code() == ErrorCode::State;
          }
          if (!rejected) throw std::runtime_error("toggling hidden " + render_token(t) + " was accepted");
        }
        if (s.visible != visible_by_definition(g, s)) throw std::runtime_error("visible set diverged");
        for (const Token& t : s.visible) {
          for (const Token& r : removed_since_refresh) {
            if (t == r || is_ancestor(r, t)) throw std::runtime_error("removed node " + render_token(t) + " visible");
          }
        }
      }
    } catch (const std::exception& e) {
      out.fail(std::string(e.what()) + " after" + trace);
    }
  }
  return out;
}

PropertyOutcome check_default_view(std::uint64_t seed, std::size_t graphs) {
  std::mt19937_64 rng(seed);
  PropertyOutcome out;
  for (std::size_t k = 0; k < graphs; ++k) {
    ++out.trials;
    RandomGraphOptions opt;
    opt.decorate = false;
    const EntityGraph g = random_graph(rng, opt);
    const ViewState s = default_view(g);
    std::set<Token> want;
    for (const auto& [t, e] : g.entities()) {
      if (e.kind == EntityKind::Solution || e.kind == EntityKind::Project) want.insert(t);
    }
    if (s.visible != want) out.fail("default view shows " + describe(s.visible) + ", expected " + describe(want));
    if (s.visible != visible_by_definition(g, s)) out.fail("default view visible set inconsistent");
    if (s.enabled_relations != std::set<RelationId>{RelationId::Declares}) out.fail("default view enables more than declares");
    if (!s.removed.empty() || !s.highlighted.empty()) out.fail("default view starts with removals or highlights");
  }
  return out;
}

PropertyOutcome check_glyph_table() {
  PropertyOutcome out;
  std::vector<std::optional<Accessibility>> accesses{std::nullopt};
  accesses.insert(accesses.end(), kAllAccessibilities.begin(), kAllAccessibilities.end());
  constexpr std::array kCounts = {std::pair{0u, 0u}, std::pair{3u, 0u}, std::pair{0u, 4u}, std::pair{12u, 30u},
                                  std::pair{100u, 100u}};
  constexpr std::array kModes = {ScalingMode::Linear, ScalingMode::Logarithmic, ScalingMode::SquareRoot};
  constexpr std::array kTags = {MethodKind::Tag::Ordinary, MethodKind::Tag::Constructor, MethodKind::Tag::Getter,
                                MethodKind::Tag::Setter, MethodKind::Tag::Operator, MethodKind::Tag::Other};

  for (ScalingMode mode : kModes) {
    GlyphConfig cfg;
    cfg.scaling = mode;
    const double smallest_type = scale_radius(cfg.base_radius.at(EntityKind::Type), mode, cfg.scale_anchor);
    for (EntityKind kind : kAllEntityKinds) {
      std::vector<Entity> shapes;
      if (kind == EntityKind::Type) {
        for (TypeKind tk : kAllTypeKinds) {
          for (auto [inst, stat] : kCounts) {
            Entity e;
            e.kind = kind;
            e.type_kind = tk;
            e.instance_member_count = inst;
            e.static_member_count = stat;
            shapes.push_back(e);
          }
        }
      } else if (kind == EntityKind::Method) {
        for (auto tag : kTags) {
          Entity e;
          e.kind = kind;
          e.method_kind = MethodKind{tag, tag == MethodKind::Tag::Other ? "destructor" : ""};
          shapes.push_back(e);
        }
      } else {
        Entity e;
        e.kind = kind;
        shapes.push_back(e);
      }
      for (const Entity& shape : shapes) {
        for (const auto& access : accesses) {
          for (bool is_static : {false, true}) {
            for (unsigned mask = 0; mask < 8; ++mask) {
              for (int copies : {1, 3}) {
                ++out.trials;
                Entity e = shape;
                e.name = "E";
                e.accessibility = access;
                e.is_static = is_static;
                for (int c = 0; c < copies; ++c) {
                  for (std::size_t s = 0; s < kAllSeverities.size(); ++s) {
                    if (mask & (1u << s)) e.diagnostics.push_back({kAllSeverities[s], "C1", "m", std::nullopt});
                  }
                }
                const GlyphSpec g = glyph_for(e, cfg);
                std::ostringstream where;
                where << to_string(kind) << "/" << (access ? to_string(*access) : "none") << "/static=" << is_static
                      << "/mask=" << mask << "/" << to_string(mode) << ": ";
                const std::string at = where.str();
                if ((g.inner.style == OutlineStyle::Dashed) != is_static) out.fail(at + "inner outline style");
                if (g.middle.style != OutlineStyle::Solid || g.outer.style != OutlineStyle::Dashed) out.fail(at + "outline styles");
                if (!(g.inner.saturation > g.middle.saturation && g.middle.saturation > g.outer.saturation &&
                      g.outer.saturation > 0.0)) {
                  out.fail(at + "saturation does not fall outward");
                }
                const bool type = kind == EntityKind::Type;
                const double want_mid = type ? std::clamp(e.instance_member_count / 5.0, 0.0, 4.0) : 0.0;
                const double want_out = type ? std::clamp(e.static_member_count / 5.0, 0.0, 4.0) : 0.0;
                if (g.middle.width != want_mid || g.outer.width != want_out) out.fail(at + "outline widths");
                if ((g.middle.width == 0.0) != (!type || e.instance_member_count == 0)) out.fail(at + "middle zero rule");
                if ((g.outer.width == 0.0) != (!type || e.static_member_count == 0)) out.fail(at + "outer zero rule");
                const Effect effect = (mask & 1u) ? Effect::Fire : (mask & 2u) ? Effect::Smoke : Effect::None;
                if (g.effect != effect) out.fail(at + "effect");
                const bool public_like = !access || *access == Accessibility::Public;
                if (g.corner_icon_id.has_value() == public_like) out.fail(at + "corner icon");
                if (!(g.radius > 0.0) || !std::isfinite(g.radius)) out.fail(at + "radius not positive");
                if (is_member_kind(kind) && !(g.radius < smallest_type)) out.fail(at + "member radius not below type radius");
                const std::string icon = type ? std::string(to_string(*e.type_kind)) : std::string(to_string(kind));
                if (g.icon_id != icon) out.fail(at + "icon " + g.icon_id);
                if (!is_hex_color(g.tint)) out.fail(at + "tint " + g.tint);
              }
            }
          }
        }
      }
    }
    // Radius and outline widths grow with member counts.
    Entity t;
    t.kind = EntityKind::Type;
    t.type_kind = TypeKind::Class;
    double last_radius = 0.0, last_mid = -1.0;
    for (std::uint32_t n = 0; n <= 300; ++n) {
      ++out.trials;
      t.instance_member_count = n;
      const GlyphSpec g = glyph_for(t, cfg);
      if (!(g.radius > last_radius)) out.fail("radius not strictly increasing at " + std::to_string(n));
      if (g.middle.width < last_mid) out.fail("middle width decreasing at " + std::to_string(n));
      last_radius = g.radius;
      last_mid = g.middle.width;
    }
  }

  // Reference glyphs.
  ++out.trials;
  Entity b;
  b.kind = EntityKind::Type;
  b.type_kind = TypeKind::Class;
  b.accessibility = Accessibility::Public;
  b.is_static = true;
  b.static_member_count = 6;
  const GlyphSpec gb = glyph_for(b);
  if (!(gb.inner.style == OutlineStyle::Dashed && gb.middle.width == 0.0 && gb.outer.width > 0.0 && !gb.corner_icon_id)) {
    out.fail("static class with only static members");
  }
  ++out.trials;
  Entity d;
  d.kind = EntityKind::Type;
  d.type_kind = TypeKind::Class;
  d.accessibility = Accessibility::Private;
  d.instance_member_count = 3;
  const GlyphSpec gd = glyph_for(d);
  if (!(gd.inner.style == OutlineStyle::Solid && gd.middle.width > 0.0 && gd.outer.width == 0.0 &&
        gd.corner_icon_id == "access-private")) {
    out.fail("non-static private class");
  }
  ++out.trials;
  Entity m;
  m.kind = EntityKind::Method;
  m.method_kind = MethodKind{};
  m.accessibility = Accessibility::Public;
  m.diagnostics.push_back({Severity::Warning, "W1", "warning", std::nullopt});
  if (glyph_for(m).effect != Effect::Smoke) out.fail("method with a warning");
  m.diagnostics.push_back({Severity::Error, "E1", "error", std::nullopt});
  if (glyph_for(m).effect != Effect::Fire) out.fail("method with an error");

  ++out.trials;
  Entity big;
  big.kind = EntityKind::Type;
  big.type_kind = TypeKind::Class;
  big.instance_member_count = 500;
  GlyphConfig log_cfg;
  log_cfg.scaling = ScalingMode::Logarithmic;
  if (!(node_radius(big, log_cfg) < node_radius(big))) out.fail("log radius not below linear radius at 500 members");

  ++out.trials;
  std::set<std::string> colors;
  for (RelationId r : kAllRelations) {
    const EdgeStyle s = default_edge_style(r);
    colors.insert(s.color);
    if (s.enabled != (r == RelationId::Declares)) out.fail("default enablement of " + std::string(to_string(r)));
  }
  if (colors.size() != kAllRelations.size()) out.fail("default edge colours not distinct");
  return out;
}

}  // namespace testsupport
