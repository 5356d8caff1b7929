// SPDX-License-Identifier: Apache-2.0
#include "codecarta/graph_builder.hpp"

#include "codecarta/error.hpp"

namespace codecarta {

GraphBuilder::Id GraphBuilder::add(Entity entity, std::optional<Id> parent) {
  if (parent && *parent >= nodes_.size()) throw Error(ErrorCode::Structure, "unknown parent index");
  nodes_.push_back({std::move(entity), parent});
  return nodes_.size() - 1;
}

void GraphBuilder::relate(RelationId relation, Id source, Id target) {
  if (relation == RelationId::Declares) throw Error(ErrorCode::Structure, "declares edges come from parents");
  if (source >= nodes_.size() || target >= nodes_.size()) throw Error(ErrorCode::Structure, "unknown edge endpoint");
  edges_.push_back({relation, {source, target}});
}

std::vector<Token> GraphBuilder::tokens() const {
  std::vector<ForestNode> forest;
  forest.reserve(nodes_.size());
  for (const Node& n : nodes_) forest.push_back({n.entity.kind, n.entity.name, n.entity.disambiguator, n.parent});
  return assign_tokens(forest);
}

EntityGraph GraphBuilder::build() const {
  const std::vector<Token> tokens = this->tokens();
  EntityMap entities;
  RelationMap relations;
  for (Id i = 0; i < nodes_.size(); ++i) {
    Entity e = nodes_[i].entity;
    e.token = tokens[i];
    if (e.kind == EntityKind::Type) {
      e.instance_member_count = 0;
      e.static_member_count = 0;
    }
    entities.emplace(tokens[i], std::move(e));
  }
  for (Id i = 0; i < nodes_.size(); ++i) {
    const auto& p = nodes_[i].parent;
    if (!p) continue;
    relations[RelationId::Declares].insert({tokens[*p], tokens[i]});
    Entity& parent = entities.at(tokens[*p]);
    const Entity& child = nodes_[i].entity;
    if (parent.kind == EntityKind::Type && is_member_kind(child.kind)) {
      (child.is_static ? parent.static_member_count : parent.instance_member_count) += 1;
    }
  }
  for (const auto& [relation, ends] : edges_) {
    relations[relation].insert({tokens[ends.first], tokens[ends.second]});
  }
  return EntityGraph(std::move(entities), std::move(relations));
}

}  // namespace codecarta
