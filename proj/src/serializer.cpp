// SPDX-License-Identifier: Apache-2.0
#include "codecarta/serializer.hpp"

#include <cmath>

#include <json.hpp>

#include "codecarta/error.hpp"

namespace codecarta {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json scalar_to_json(const Scalar& value) {
  return std::visit([](const auto& v) { return ordered_json(v); }, value);
}

ordered_json diagnostic_to_json(const Diagnostic& d) {
  ordered_json out = ordered_json::object();
  out["severity"] = to_string(d.severity);
  out["code"] = d.code;
  out["message"] = d.message;
  if (d.location) {
    out["file"] = d.location->file;
    out["line"] = d.location->line;
    out["column"] = d.location->column;
  }
  return out;
}

ordered_json entity_to_json(const Entity& e) {
  ordered_json out = ordered_json::object();
  out["name"] = e.name;
  out["kind"] = to_string(e.kind);
  if (e.type_kind) out["typeKind"] = to_string(*e.type_kind);
  if (e.method_kind) out["methodKind"] = to_string(*e.method_kind);
  if (e.accessibility) out["accessibility"] = to_string(*e.accessibility);
  out["isStatic"] = e.is_static;
  if (!e.disambiguator.empty()) out["disambiguator"] = e.disambiguator;
  if (e.doc) out["doc"] = e.doc->paragraphs;
  if (!e.diagnostics.empty()) {
    ordered_json diags = ordered_json::array();
    for (const auto& d : e.diagnostics) diags.push_back(diagnostic_to_json(d));
    out["diagnostics"] = std::move(diags);
  }
  out["instanceMemberCount"] = e.instance_member_count;
  out["staticMemberCount"] = e.static_member_count;
  if (!e.spans.empty()) {
    ordered_json spans = ordered_json::array();
    for (const auto& s : e.spans) {
      spans.push_back({s.file, s.begin_line, s.begin_column, s.end_line, s.end_column});
    }
    out["spans"] = std::move(spans);
  }
  if (!e.extra.empty()) {
    ordered_json extra = ordered_json::object();
    for (const auto& [key, value] : e.extra) extra[key] = scalar_to_json(value);
    out["extra"] = std::move(extra);
  }
  return out;
}

[[noreturn]] void structural(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Validation, path + ": " + what);
}

const ordered_json& require(const ordered_json& object, const char* key, const std::string& path) {
  auto it = object.find(key);
  if (it == object.end()) structural(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string get_string(const ordered_json& value, const std::string& path) {
  if (!value.is_string()) structural(path, "expected a string");
  return value.get<std::string>();
}

std::uint32_t get_count(const ordered_json& value, const std::string& path) {
  if (!value.is_number_unsigned()) structural(path, "expected a non-negative integer");
  const auto n = value.get<std::uint64_t>();
  if (n > std::numeric_limits<std::uint32_t>::max()) structural(path, "integer out of range");
  return static_cast<std::uint32_t>(n);
}

bool get_bool(const ordered_json& value, const std::string& path) {
  if (!value.is_boolean()) structural(path, "expected a boolean");
  return value.get<bool>();
}

template <typename T>
T get_enum(const ordered_json& value, const std::string& path, std::optional<T> (*parse)(std::string_view)) {
  const std::string text = get_string(value, path);
  auto parsed = parse(text);
  if (!parsed) structural(path, "unknown value '" + text + "'");
  return *parsed;
}

Token get_token(const std::string& text, const std::string& path) {
  try {
    return parse_token(text);
  } catch (const Error& e) {
    structural(path, std::string("malformed token '") + text + "': " + e.what());
  }
}

Diagnostic diagnostic_from_json(const ordered_json& j, const std::string& path) {
  if (!j.is_object()) structural(path, "expected an object");
  Diagnostic d;
  d.severity = get_enum<Severity>(require(j, "severity", path), path + "/severity", &parse_severity);
  d.code = get_string(require(j, "code", path), path + "/code");
  d.message = get_string(require(j, "message", path), path + "/message");
  if (j.contains("file")) {
    SourceLocation loc;
    loc.file = get_string(j.at("file"), path + "/file");
    loc.line = get_count(require(j, "line", path), path + "/line");
    loc.column = get_count(require(j, "column", path), path + "/column");
    d.location = std::move(loc);
  }
  return d;
}

Entity entity_from_json(const Token& token, const ordered_json& j, const std::string& path) {
  if (!j.is_object()) structural(path, "expected an object");
  Entity e;
  e.token = token;
  e.name = get_string(require(j, "name", path), path + "/name");
  e.kind = get_enum<EntityKind>(require(j, "kind", path), path + "/kind", &parse_entity_kind);
  if (j.contains("typeKind")) {
    e.type_kind = get_enum<TypeKind>(j.at("typeKind"), path + "/typeKind", &parse_type_kind);
  }
  if (j.contains("methodKind")) {
    auto parsed = parse_method_kind(get_string(j.at("methodKind"), path + "/methodKind"));
    if (!parsed) structural(path + "/methodKind", "empty method kind");
    e.method_kind = std::move(parsed);
  }
  if (j.contains("accessibility")) {
    e.accessibility =
        get_enum<Accessibility>(j.at("accessibility"), path + "/accessibility", &parse_accessibility);
  }
  e.is_static = get_bool(require(j, "isStatic", path), path + "/isStatic");
  if (j.contains("disambiguator")) e.disambiguator = get_string(j.at("disambiguator"), path + "/disambiguator");
  if (j.contains("doc")) {
    const auto& doc = j.at("doc");
    if (!doc.is_array()) structural(path + "/doc", "expected an array of paragraphs");
    DocComment comment;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      comment.paragraphs.push_back(get_string(doc[i], path + "/doc/" + std::to_string(i)));
    }
    e.doc = std::move(comment);
  }
  if (j.contains("diagnostics")) {
    const auto& diags = j.at("diagnostics");
    if (!diags.is_array()) structural(path + "/diagnostics", "expected an array");
    for (std::size_t i = 0; i < diags.size(); ++i) {
      e.diagnostics.push_back(diagnostic_from_json(diags[i], path + "/diagnostics/" + std::to_string(i)));
    }
  }
  e.instance_member_count =
      get_count(require(j, "instanceMemberCount", path), path + "/instanceMemberCount");
  e.static_member_count = get_count(require(j, "staticMemberCount", path), path + "/staticMemberCount");
  if (j.contains("spans")) {
    const auto& spans = j.at("spans");
    if (!spans.is_array()) structural(path + "/spans", "expected an array");
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const std::string sp = path + "/spans/" + std::to_string(i);
      const auto& s = spans[i];
      if (!s.is_array() || s.size() != 5) structural(sp, "expected [file, line, column, endLine, endColumn]");
      e.spans.push_back({get_string(s[0], sp + "/0"), get_count(s[1], sp + "/1"), get_count(s[2], sp + "/2"),
                         get_count(s[3], sp + "/3"), get_count(s[4], sp + "/4")});
    }
  }
  if (j.contains("extra")) {
    const auto& extra = j.at("extra");
    if (!extra.is_object()) structural(path + "/extra", "expected an object");
    for (const auto& [key, value] : extra.items()) {
      const std::string vp = path + "/extra/" + key;
      if (value.is_boolean()) {
        e.extra[key] = value.get<bool>();
      } else if (value.is_number_integer()) {
        if (value.is_number_unsigned() && value.get<std::uint64_t>() > std::numeric_limits<std::int64_t>::max()) {
          structural(vp, "integer out of range");
        }
        e.extra[key] = value.get<std::int64_t>();
      } else if (value.is_number_float()) {
        e.extra[key] = value.get<double>();
      } else if (value.is_string()) {
        e.extra[key] = value.get<std::string>();
      } else {
        structural(vp, "extra values must be scalars");
      }
    }
  }
  return e;
}

void check_finite(const EntityGraph& graph) {
  for (const auto& [token, e] : graph.entities()) {
    for (const auto& [key, value] : e.extra) {
      if (const double* d = std::get_if<double>(&value); d != nullptr && !std::isfinite(*d)) {
        throw Error(ErrorCode::Validation,
                    "/entities/" + render_token(token) + "/extra/" + key + ": non-finite number");
      }
    }
  }
}

}  // namespace

std::string serialize(const EntityGraph& graph) {
  const auto report = validate_graph(graph);
  if (!report.valid()) {
    throw Error(ErrorCode::Validation, "refusing to serialize an invalid graph:\n" + report.summary());
  }
  check_finite(graph);

  ordered_json doc = ordered_json::object();
  doc["schemaVersion"] = graph.schema_version();
  ordered_json entities = ordered_json::object();
  for (const auto& [token, entity] : graph.entities()) {
    entities[render_token(token)] = entity_to_json(entity);
  }
  doc["entities"] = std::move(entities);

  std::vector<RelationId> ids(kAllRelations.begin(), kAllRelations.end());
  std::sort(ids.begin(), ids.end(), [](RelationId a, RelationId b) { return to_string(a) < to_string(b); });
  ordered_json relations = ordered_json::object();
  for (RelationId id : ids) {
    ordered_json edges = ordered_json::array();
    for (const Edge& edge : graph.relation(id)) {
      edges.push_back({render_token(edge.source), render_token(edge.target)});
    }
    relations[std::string(to_string(id))] = std::move(edges);
  }
  doc["relations"] = std::move(relations);
  return doc.dump(1) + "\n";
}

EntityGraph deserialize(std::string_view document) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!doc.is_object()) structural("", "top level must be an object");

  const auto& version = require(doc, "schemaVersion", "");
  if (!version.is_string()) structural("/schemaVersion", "expected a string");
  if (version.get<std::string>() != kSchemaVersion) {
    throw Error(ErrorCode::Version, "unsupported schema version '" + version.get<std::string>() +
                                        "' (expected '" + std::string(kSchemaVersion) + "')");
  }

  EntityMap entities;
  const auto& ents = require(doc, "entities", "");
  if (!ents.is_object()) structural("/entities", "expected an object");
  for (const auto& [key, value] : ents.items()) {
    const std::string path = "/entities/" + key;
    Token token = get_token(key, path);
    entities.emplace(token, entity_from_json(token, value, path));
  }

  RelationMap relations;
  const auto& rels = require(doc, "relations", "");
  if (!rels.is_object()) structural("/relations", "expected an object");
  if (!rels.contains("declares")) structural("/relations", "missing relation 'declares'");
  for (const auto& [key, value] : rels.items()) {
    const std::string path = "/relations/" + key;
    auto id = parse_relation(key);
    if (!id) structural(path, "unknown relation");
    if (!value.is_array()) structural(path, "expected an array of [source, target] pairs");
    auto& edges = relations[*id];
    for (std::size_t i = 0; i < value.size(); ++i) {
      const std::string ep = path + "/" + std::to_string(i);
      const auto& pair = value[i];
      if (!pair.is_array() || pair.size() != 2) structural(ep, "expected a [source, target] pair");
      edges.insert({get_token(get_string(pair[0], ep + "/0"), ep + "/0"),
                    get_token(get_string(pair[1], ep + "/1"), ep + "/1")});
    }
  }

  EntityGraph graph(std::move(entities), std::move(relations), version.get<std::string>());
  const auto report = validate_graph(graph);
  if (!report.valid()) {
    const Violation& first = report.violations.front();
    std::string path = "/entities";
    if (first.relation) path = "/relations/" + std::string(to_string(*first.relation));
    else if (!first.tokens.empty()) path += "/" + render_token(first.tokens.front());
    throw Error(ErrorCode::Validation, path + ": " + first.message);
  }
  return graph;
}

}  // namespace codecarta
