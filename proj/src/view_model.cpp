// SPDX-License-Identifier: Apache-2.0
#include "codecarta/view_model.hpp"

#include "codecarta/error.hpp"

namespace codecarta {

bool is_visible(const EntityGraph& graph, const ViewState& state, const Token& token) {
  const Entity* entity = graph.find(token);
  if (entity == nullptr) return false;
  if (!state.enabled_kinds.contains(entity->kind)) return false;
  if (state.removed.contains(token)) return false;
  for (auto ancestor = token.parent(); ancestor; ancestor = ancestor->parent()) {
    if (!state.expanded.contains(*ancestor) || state.removed.contains(*ancestor)) return false;
  }
  return true;
}

std::set<Token> compute_visible(const EntityGraph& graph, const ViewState& state) {
  std::set<Token> visible;
  for (const auto& [token, entity] : graph.entities()) {
    if (is_visible(graph, state, token)) visible.insert(visible.end(), token);
  }
  return visible;
}

ViewState default_view(const EntityGraph& graph) {
  ViewState state;
  for (EntityKind kind : kAllEntityKinds) {
    if (kind != EntityKind::Package) state.enabled_kinds.insert(kind);
  }
  state.enabled_relations = {RelationId::Declares};
  for (const Token& root : graph.roots()) {
    if (graph.at(root).kind == EntityKind::Solution) state.expanded.insert(root);
  }
  state.visible = compute_visible(graph, state);
  return state;
}

ViewState full_view(const EntityGraph& graph) {
  ViewState state;
  state.enabled_kinds.insert(kAllEntityKinds.begin(), kAllEntityKinds.end());
  state.enabled_relations.insert(kAllRelations.begin(), kAllRelations.end());
  for (const auto& [token, entity] : graph.entities()) {
    if (!graph.declared_children(token).empty()) state.expanded.insert(token);
    state.visible.insert(state.visible.end(), token);
  }
  return state;
}

namespace {

void require_visible(const ViewState& state, const Token& token, const char* action) {
  if (!state.visible.contains(token)) {
    throw Error(ErrorCode::State, std::string("cannot ") + action + " hidden node " + render_token(token));
  }
}

// Erases `token` (optionally) and every visible descendant. Descendants are
// contiguous right after the token in token order.
void hide_cone(ViewState& state, const Token& token, bool include_self) {
  auto it = state.visible.lower_bound(token);
  if (it != state.visible.end() && *it == token) {
    it = include_self ? state.visible.erase(it) : std::next(it);
  }
  while (it != state.visible.end() && is_ancestor(token, *it)) it = state.visible.erase(it);
}

void reveal_below(const EntityGraph& graph, ViewState& state, const Token& token) {
  std::vector<Token> stack{token};
  while (!stack.empty()) {
    Token current = std::move(stack.back());
    stack.pop_back();
    for (const Token& child : graph.declared_children(current)) {
      if (state.removed.contains(child)) continue;
      const Entity* entity = graph.find(child);
      if (entity == nullptr) continue;
      if (state.enabled_kinds.contains(entity->kind)) state.visible.insert(child);
      if (state.expanded.contains(child)) stack.push_back(child);
    }
  }
}

}  // namespace

ViewState toggle_expand(const EntityGraph& graph, ViewState state, const Token& token) {
  require_visible(state, token, "toggle");
  if (state.expanded.erase(token) > 0) {
    hide_cone(state, token, /*include_self=*/false);
  } else {
    state.expanded.insert(token);
    reveal_below(graph, state, token);
  }
  return state;
}

ViewState remove(const EntityGraph& /*graph*/, ViewState state, const Token& token) {
  require_visible(state, token, "remove");
  state.removed.insert(token);
  hide_cone(state, token, /*include_self=*/true);
  return state;
}

ViewState refresh(ViewState state, const EntityGraph& graph) {
  state.removed.clear();
  state.highlighted.clear();
  std::erase_if(state.expanded, [&](const Token& t) { return !graph.contains(t); });
  state.visible = compute_visible(graph, state);
  return state;
}

ViewState set_kind_enabled(const EntityGraph& graph, ViewState state, EntityKind kind, bool enabled) {
  if (enabled) {
    state.enabled_kinds.insert(kind);
  } else {
    state.enabled_kinds.erase(kind);
  }
  state.visible = compute_visible(graph, state);
  std::erase_if(state.highlighted, [&](const Token& t) { return !state.visible.contains(t); });
  return state;
}

ViewState set_relation_enabled(ViewState state, RelationId relation, bool enabled) {
  if (relation == RelationId::Declares) return state;
  if (enabled) {
    state.enabled_relations.insert(relation);
  } else {
    state.enabled_relations.erase(relation);
  }
  return state;
}

}  // namespace codecarta
