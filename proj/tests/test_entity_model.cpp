// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "codecarta/error.hpp"
#include "codecarta/graph_builder.hpp"
#include "random_graph.hpp"

using namespace codecarta;

namespace {

Entity make(EntityKind kind, std::string name) {
  Entity e;
  e.kind = kind;
  e.name = std::move(name);
  if (kind == EntityKind::Type) e.type_kind = TypeKind::Class;
  if (kind == EntityKind::Method) e.method_kind = MethodKind{};
  if (kind_rank(kind) >= 3) e.accessibility = Accessibility::Public;
  return e;
}

// Solution > Project > Namespace > Type with one field and one static method.
GraphBuilder small() {
  GraphBuilder b;
  const auto s = b.add(make(EntityKind::Solution, "S"));
  const auto p = b.add(make(EntityKind::Project, "P"), s);
  const auto n = b.add(make(EntityKind::Namespace, "N"), p);
  const auto t = b.add(make(EntityKind::Type, "T"), n);
  b.add(make(EntityKind::Field, "f"), t);
  Entity m = make(EntityKind::Method, "Make");
  m.is_static = true;
  b.add(m, t);
  return b;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Usage;
}

EntityGraph rebuild(const EntityGraph& g, auto&& mutate) {
  EntityMap entities = g.entities();
  RelationMap relations = g.relations();
  mutate(entities, relations);
  return EntityGraph(std::move(entities), std::move(relations));
}

}  // namespace

TEST_CASE("builder output is valid and recounts members") {
  const EntityGraph g = small().build();
  CHECK(g.size() == 6);
  CHECK(validate_graph(g).valid());
  const Token type{0, 0, 0, 0};
  CHECK(g.at(type).name == "T");
  CHECK(g.at(type).instance_member_count == 1);
  CHECK(g.at(type).static_member_count == 1);
  CHECK(member_counts(g, type) == MemberCounts{1, 1});
  CHECK(g.roots() == std::vector<Token>{Token{0}});
  CHECK(g.declaring_parent(type) == Token{0, 0, 0});
  for (RelationId r : kAllRelations) CHECK_NOTHROW(g.relation(r));
}

TEST_CASE("lookup errors") {
  const EntityGraph g = small().build();
  CHECK(code_of([&] { g.at(Token{9}); }) == ErrorCode::NotFound);
  CHECK(code_of([&] { children(g, Token{9}); }) == ErrorCode::NotFound);
  CHECK(code_of([&] { member_counts(g, Token{0, 0}); }) == ErrorCode::Kind);
  CHECK(code_of([&] { member_counts(g, Token{7, 7}); }) == ErrorCode::NotFound);
}

TEST_CASE("children are ordered by sibling key") {
  GraphBuilder b;
  const auto t = b.add(make(EntityKind::Type, "T"));
  for (const char* name : {"zeta", "Alpha", "alpha"}) b.add(make(EntityKind::Method, name), t);
  b.add(make(EntityKind::Type, "Nested"), t);
  b.add(make(EntityKind::Field, "beta"), t);
  const EntityGraph g = b.build();
  std::vector<std::string> names;
  for (const Entity* e : children(g, Token{0})) names.push_back(e->name);
  CHECK(names == std::vector<std::string>{"Nested", "Alpha", "alpha", "beta", "zeta"});
}

TEST_CASE("validate_graph reports each violated invariant") {
  const EntityGraph g = small().build();

  const auto dangling = rebuild(g, [](EntityMap&, RelationMap& r) {
    r[RelationId::TypeOf].insert({Token{0, 0, 0, 0, 0}, Token{5}});
  });
  CHECK(validate_graph(dangling).count(ViolationKind::MissingEndpoint) == 1);

  const auto root = rebuild(g, [](EntityMap& e, RelationMap&) {
    Entity lone = make(EntityKind::Project, "Stray");
    lone.token = Token{1};
    e[lone.token] = lone;
  });
  CHECK(validate_graph(root).count(ViolationKind::RootNotSolution) == 1);

  const auto rank = rebuild(g, [](EntityMap& e, RelationMap&) {
    Entity& ns = e.at(Token{0, 0, 0});
    ns.kind = EntityKind::Solution;
  });
  CHECK(validate_graph(rank).count(ViolationKind::KindRank) >= 1);

  const auto presence = rebuild(g, [](EntityMap& e, RelationMap&) {
    e.at(Token{0, 0, 0, 0}).type_kind.reset();
    e.at(Token{0, 0, 0, 0, 0}).method_kind.reset();
    e.at(Token{0, 0}).accessibility = Accessibility::Private;
  });
  const auto report = validate_graph(presence);
  CHECK(report.count(ViolationKind::TypeKindPresence) == 1);
  CHECK(report.count(ViolationKind::MethodKindPresence) == 1);
  CHECK(report.count(ViolationKind::AccessibilityPresence) == 1);
  CHECK_FALSE(report.summary().empty());

  const auto counts = rebuild(g, [](EntityMap& e, RelationMap&) { e.at(Token{0, 0, 0, 0}).instance_member_count = 4; });
  CHECK(validate_graph(counts).count(ViolationKind::MemberCount) == 1);

  const auto cycle = rebuild(g, [](EntityMap&, RelationMap& r) {
    r[RelationId::DependsOn].insert({Token{0, 0}, Token{0, 0}});
  });
  CHECK(validate_graph(cycle).count(ViolationKind::DependsOnCycle) == 1);

  const auto mismatch = rebuild(g, [](EntityMap& e, RelationMap&) {
    Entity orphan = make(EntityKind::Namespace, "Orphan");
    orphan.token = Token{0, 0, 7};
    e[orphan.token] = orphan;  // token names a parent, but no declares edge does
  });
  CHECK(validate_graph(mismatch).count(ViolationKind::TokenMismatch) >= 1);
}

TEST_CASE("random graphs validate") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 50; ++k) {
    const EntityGraph g = testsupport::random_graph(rng);
    const auto report = validate_graph(g);
    CHECK_MESSAGE(report.valid(), report.summary());
  }
}
