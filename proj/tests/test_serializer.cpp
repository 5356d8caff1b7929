// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <json.hpp>
#include <random>

#include "codecarta/error.hpp"
#include "codecarta/graph_builder.hpp"
#include "codecarta/serializer.hpp"
#include "properties.hpp"
#include "random_graph.hpp"

using namespace codecarta;

namespace {

EntityGraph minimal() {
  GraphBuilder b;
  Entity s;
  s.name = "S";
  b.add(s);
  return b.build();
}

Error error_of(std::string_view document) {
  try {
    deserialize(document);
  } catch (const Error& e) {
    return e;
  }
  FAIL("accepted " << document);
  return Error(ErrorCode::Usage, "");
}

std::string with(const EntityGraph& g, auto&& mutate) {
  auto doc = nlohmann::json::parse(serialize(g));
  mutate(doc);
  return doc.dump();
}

}  // namespace

TEST_CASE("minimal graph") {
  const EntityGraph g = minimal();
  const std::string doc = serialize(g);
  const auto json = nlohmann::json::parse(doc);
  CHECK(json["schemaVersion"] == "codecarta-graph/1");
  CHECK(json["entities"].size() == 1);
  CHECK(json["entities"]["0"]["kind"] == "solution");
  CHECK(json["relations"].size() == kAllRelations.size());
  CHECK(deserialize(doc) == g);
  CHECK(serialize(g) == doc);
}

TEST_CASE("entities are keyed in token order, not text order") {
  GraphBuilder b;
  Entity s;
  s.name = "S";
  const auto root = b.add(s);
  for (int k = 0; k < 12; ++k) {
    Entity p;
    p.kind = EntityKind::Project;
    p.name = "P" + std::string(k < 10 ? "0" : "") + std::to_string(k);
    b.add(p, root);
  }
  const std::string doc = serialize(b.build());
  CHECK(doc.find("\"0.2\"") < doc.find("\"0.10\""));
}

TEST_CASE("unknown schema version") {
  const std::string doc = with(minimal(), [](auto& j) { j["schemaVersion"] = "codecarta-graph/99"; });
  const Error e = error_of(doc);
  CHECK(e.code() == ErrorCode::Version);
  CHECK(std::string(e.what()).find("codecarta-graph/99") != std::string::npos);
}

TEST_CASE("edge to a missing token") {
  const std::string doc =
      with(minimal(), [](auto& j) { j["relations"]["typeOf"] = nlohmann::json::array({{"0", "0.4"}}); });
  const Error e = error_of(doc);
  CHECK(e.code() == ErrorCode::Validation);
  const std::string message = e.what();
  CHECK(message.find("typeOf") != std::string::npos);
  CHECK(message.find("0.4") != std::string::npos);
}

TEST_CASE("malformed text carries a byte offset") {
  const Error e = error_of("{\"schemaVersion\": \"codecarta-graph/1\",, }");
  CHECK(e.code() == ErrorCode::Parse);
  REQUIRE(e.position());
  CHECK(*e.position() == 38);
  CHECK(error_of("").code() == ErrorCode::Parse);
  CHECK(error_of("[]").code() != ErrorCode::Version);
}

TEST_CASE("bad field values are validation errors") {
  CHECK(error_of(with(minimal(), [](auto& j) { j["entities"]["0"]["kind"] = "module"; })).code() ==
        ErrorCode::Validation);
  CHECK(error_of(with(minimal(), [](auto& j) { j["entities"]["01"] = j["entities"]["0"]; })).code() ==
        ErrorCode::Validation);
  CHECK(error_of(with(minimal(), [](auto& j) { j["entities"]["0"]["kind"] = "project"; })).code() ==
        ErrorCode::Validation);
}

TEST_CASE("serialize refuses invalid graphs") {
  const EntityGraph g = minimal();
  RelationMap relations = g.relations();
  relations[RelationId::Returns].insert({Token{0}, Token{3}});
  try {
    serialize(EntityGraph(g.entities(), relations));
    FAIL("serialized an invalid graph");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Validation);
  }
}

TEST_CASE("random round trips, including a 1000-node graph") {
  std::mt19937_64 rng(23);
  testsupport::RandomGraphOptions opt;
  opt.max_nodes = 1000;
  const EntityGraph big = testsupport::random_graph(rng, opt);
  CHECK(deserialize(serialize(big)) == big);
  const auto o = testsupport::check_serializer_round_trip(29, 100);
  CHECK_MESSAGE(o.ok(), o.first_failure);
}
