// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "codecarta/entity_model.hpp"

namespace codecarta {

/// Collects entities by index, then assigns tokens and emits the declares
/// relation in one go. Member counts of Type entities are recomputed from
/// their member children.
class GraphBuilder {
 public:
  using Id = std::size_t;

  Id add(Entity entity, std::optional<Id> parent = std::nullopt);
  Entity& entity(Id id) { return nodes_.at(id).entity; }
  const Entity& entity(Id id) const { return nodes_.at(id).entity; }
  std::optional<Id> parent(Id id) const { return nodes_.at(id).parent; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Records a non-declares edge; duplicates collapse.
  void relate(RelationId relation, Id source, Id target);

  /// Throws Error(Ambiguity) for indistinguishable siblings.
  EntityGraph build() const;
  /// Tokens the next build() will assign, indexed by Id.
  std::vector<Token> tokens() const;

 private:
  struct Node {
    Entity entity;
    std::optional<Id> parent;
  };
  std::vector<Node> nodes_;
  std::vector<std::pair<RelationId, std::pair<Id, Id>>> edges_;
};

}  // namespace codecarta
