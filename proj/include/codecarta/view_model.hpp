// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>

#include "codecarta/entity_model.hpp"

namespace codecarta {

/// What the diagram shows. `visible` is maintained incrementally by the
/// transitions below and always equals compute_visible(graph, state).
struct ViewState {
  std::set<Token> expanded;
  std::set<Token> removed;
  std::set<Token> highlighted;
  std::set<EntityKind> enabled_kinds;
  std::set<RelationId> enabled_relations;
  std::set<Token> visible;

  friend bool operator==(const ViewState&, const ViewState&) = default;
};

/// Closed-form visibility: every strict ancestor expanded, neither the token
/// nor any ancestor removed, and its kind enabled.
bool is_visible(const EntityGraph& graph, const ViewState& state, const Token& token);

/// Recomputes the visible set from scratch.
std::set<Token> compute_visible(const EntityGraph& graph, const ViewState& state);

/// Solutions expanded, every kind but Package enabled, only declares edges.
/// The visible set is exactly the Solution and Project nodes.
ViewState default_view(const EntityGraph& graph);

/// Every entity visible, every kind and relation enabled.
ViewState full_view(const EntityGraph& graph);

/// Flips expansion of a visible node. Collapsing hides its visible cone;
/// expanding reveals whatever the visibility rule admits below it, which is
/// just the direct children unless deeper nodes were expanded before.
/// Throws Error(State) for a hidden or unknown token.
ViewState toggle_expand(const EntityGraph& graph, ViewState state, const Token& token);

/// Removes a visible node and its cone until the next refresh.
/// Throws Error(State) for a hidden or unknown token.
ViewState remove(const EntityGraph& graph, ViewState state, const Token& token);

/// Clears removals and highlights and keeps expansions of tokens that still
/// exist. Callers re-seed the layout afterwards.
ViewState refresh(ViewState state, const EntityGraph& graph);

ViewState set_kind_enabled(const EntityGraph& graph, ViewState state, EntityKind kind, bool enabled);

/// declares cannot be disabled; requests to do so are ignored.
ViewState set_relation_enabled(ViewState state, RelationId relation, bool enabled);

}  // namespace codecarta
