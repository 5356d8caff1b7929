// SPDX-License-Identifier: Apache-2.0
#include "codecarta/entity_model.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

#include "codecarta/error.hpp"

namespace codecarta {

bool SourceSpan::contains(const SourceLocation& loc) const noexcept {
  if (loc.file != file) return false;
  const auto at = std::tie(loc.line, loc.column);
  return std::tie(begin_line, begin_column) <= at && at <= std::tie(end_line, end_column);
}

std::vector<std::string> DocComment::code_spans() const {
  std::vector<std::string> spans;
  for (const auto& paragraph : paragraphs) {
    std::size_t pos = 0;
    while (true) {
      const auto open = paragraph.find('`', pos);
      if (open == std::string::npos) break;
      const auto close = paragraph.find('`', open + 1);
      if (close == std::string::npos) break;
      spans.push_back(paragraph.substr(open + 1, close - open - 1));
      pos = close + 1;
    }
  }
  return spans;
}

bool Entity::has_severity(Severity severity) const noexcept {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [&](const Diagnostic& d) { return d.severity == severity; });
}

EntityGraph::EntityGraph() : EntityGraph(EntityMap{}, RelationMap{}) {}

EntityGraph::EntityGraph(EntityMap entities, RelationMap relations, std::string schema_version)
    : schema_version_(std::move(schema_version)),
      entities_(std::move(entities)),
      relations_(std::move(relations)) {
  for (RelationId id : kAllRelations) relations_[id];
  for (const Edge& edge : relations_.at(RelationId::Declares)) {
    children_[edge.source].push_back(edge.target);
    parents_.emplace(edge.target, edge.source);
  }
}

const std::set<Edge>& EntityGraph::relation(RelationId id) const { return relations_.at(id); }

const Entity* EntityGraph::find(const Token& token) const {
  auto it = entities_.find(token);
  return it == entities_.end() ? nullptr : &it->second;
}

const Entity& EntityGraph::at(const Token& token) const {
  if (const Entity* e = find(token)) return *e;
  throw Error(ErrorCode::NotFound, "unknown token " + render_token(token));
}

const std::vector<Token>& EntityGraph::declared_children(const Token& token) const {
  static const std::vector<Token> kNone;
  auto it = children_.find(token);
  return it == children_.end() ? kNone : it->second;
}

std::optional<Token> EntityGraph::declaring_parent(const Token& token) const {
  auto it = parents_.find(token);
  if (it == parents_.end()) return std::nullopt;
  return it->second;
}

std::vector<Token> EntityGraph::roots() const {
  std::vector<Token> out;
  for (const auto& [token, entity] : entities_) {
    if (!parents_.contains(token)) out.push_back(token);
  }
  return out;
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::MissingEndpoint: return "missing-endpoint";
    case ViolationKind::MultipleParents: return "multiple-parents";
    case ViolationKind::DeclaresCycle: return "declares-cycle";
    case ViolationKind::RootNotSolution: return "root-not-solution";
    case ViolationKind::KindRank: return "kind-rank";
    case ViolationKind::TokenMismatch: return "token-mismatch";
    case ViolationKind::DependsOnCycle: return "dependsOn-cycle";
    case ViolationKind::TypeKindPresence: return "typeKind-presence";
    case ViolationKind::MethodKindPresence: return "methodKind-presence";
    case ViolationKind::AccessibilityPresence: return "accessibility-presence";
    case ViolationKind::MemberCount: return "member-count";
    case ViolationKind::StaticClassInstanceMembers: return "static-class-instance-members";
  }
  return "";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [&](const Violation& v) { return v.kind == kind; }));
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << to_string(v.kind) << ": " << v.message << '\n';
  }
  return out.str();
}

namespace {

std::string join_tokens(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ", ";
    out += render_token(t);
  }
  return out;
}

MemberCounts count_members(const EntityGraph& graph, const Token& token) {
  MemberCounts counts;
  for (const Token& child : graph.declared_children(token)) {
    const Entity* e = graph.find(child);
    if (e == nullptr || !is_member_kind(e->kind)) continue;
    (e->is_static ? counts.statics : counts.instance) += 1;
  }
  return counts;
}

void check_edges(const EntityGraph& graph, ValidationReport& report) {
  for (const auto& [id, edges] : graph.relations()) {
    for (const Edge& edge : edges) {
      std::vector<Token> missing;
      if (!graph.contains(edge.source)) missing.push_back(edge.source);
      if (!graph.contains(edge.target)) missing.push_back(edge.target);
      if (missing.empty()) continue;
      report.violations.push_back(
          {ViolationKind::MissingEndpoint,
           std::string(to_string(id)) + " edge " + render_token(edge.source) + " -> " +
               render_token(edge.target) + " references missing " + join_tokens(missing),
           missing, id});
    }
  }
}

void check_declares(const EntityGraph& graph, ValidationReport& report) {
  std::map<Token, std::vector<Token>> parents;
  for (const Edge& edge : graph.relation(RelationId::Declares)) {
    const Entity* parent = graph.find(edge.source);
    const Entity* child = graph.find(edge.target);
    if (parent == nullptr || child == nullptr) continue;
    parents[edge.target].push_back(edge.source);
    if (kind_rank(child->kind) <= kind_rank(parent->kind)) {
      report.violations.push_back({ViolationKind::KindRank,
                                   std::string(to_string(parent->kind)) + " " + render_token(edge.source) +
                                       " declares " + std::string(to_string(child->kind)) + " " +
                                       render_token(edge.target) + " of equal or lower rank",
                                   {edge.source, edge.target}, RelationId::Declares});
    }
    if (edge.target.parent() != edge.source) {
      report.violations.push_back({ViolationKind::TokenMismatch,
                                   "declares edge " + render_token(edge.source) + " -> " +
                                       render_token(edge.target) + " disagrees with the token path",
                                   {edge.source, edge.target}, RelationId::Declares});
    }
  }
  for (const auto& [child, ps] : parents) {
    if (ps.size() > 1) {
      std::vector<Token> tokens = ps;
      tokens.insert(tokens.begin(), child);
      report.violations.push_back({ViolationKind::MultipleParents,
                                   render_token(child) + " has " + std::to_string(ps.size()) +
                                       " declares parents",
                                   tokens, RelationId::Declares});
    }
  }

  std::vector<Token> roots;
  for (const auto& [token, entity] : graph.entities()) {
    if (parents.contains(token)) continue;
    if (token.depth() > 1) {
      report.violations.push_back({ViolationKind::TokenMismatch,
                                   render_token(token) + " has no declares parent although its token has one",
                                   {token}, RelationId::Declares});
    } else if (entity.kind != EntityKind::Solution) {
      report.violations.push_back({ViolationKind::RootNotSolution,
                                   "declares root " + render_token(token) + " is a " +
                                       std::string(to_string(entity.kind)),
                                   {token}, RelationId::Declares});
    }
    roots.push_back(token);
  }

  // Everything with a parent must be reachable from some root; what is not
  // sits on (or hangs off) a cycle.
  std::set<Token> reached;
  std::vector<Token> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    Token t = std::move(stack.back());
    stack.pop_back();
    if (!reached.insert(t).second) continue;
    for (const Token& c : graph.declared_children(t)) {
      if (graph.contains(c)) stack.push_back(c);
    }
  }
  std::vector<Token> cyclic;
  for (const auto& [token, entity] : graph.entities()) {
    if (!reached.contains(token)) cyclic.push_back(token);
  }
  if (!cyclic.empty()) {
    report.violations.push_back({ViolationKind::DeclaresCycle,
                                 "declares cycle through " + join_tokens(cyclic), cyclic,
                                 RelationId::Declares});
  }
}

// Tarjan's strongly connected components over dependsOn restricted to
// Project/Package endpoints.
void check_depends_on(const EntityGraph& graph, ValidationReport& report) {
  auto eligible = [&](const Token& t) {
    const Entity* e = graph.find(t);
    return e != nullptr && (e->kind == EntityKind::Project || e->kind == EntityKind::Package);
  };
  std::map<Token, std::vector<Token>> adjacency;
  std::set<Token> self_loops;
  for (const Edge& edge : graph.relation(RelationId::DependsOn)) {
    if (!eligible(edge.source) || !eligible(edge.target)) continue;
    adjacency[edge.source].push_back(edge.target);
    adjacency[edge.target];
    if (edge.source == edge.target) self_loops.insert(edge.source);
  }

  std::map<Token, int> index;
  std::map<Token, int> lowlink;
  std::set<Token> on_stack;
  std::vector<Token> scc_stack;
  int counter = 0;
  std::vector<std::vector<Token>> components;

  std::function<void(const Token&)> connect = [&](const Token& v) {
    index[v] = lowlink[v] = counter++;
    scc_stack.push_back(v);
    on_stack.insert(v);
    for (const Token& w : adjacency[v]) {
      if (!index.contains(w)) {
        connect(w);
        lowlink[v] = std::min(lowlink[v], lowlink[w]);
      } else if (on_stack.contains(w)) {
        lowlink[v] = std::min(lowlink[v], index[w]);
      }
    }
    if (lowlink[v] == index[v]) {
      std::vector<Token> component;
      Token w;
      do {
        w = scc_stack.back();
        scc_stack.pop_back();
        on_stack.erase(w);
        component.push_back(w);
      } while (w != v);
      std::sort(component.begin(), component.end());
      if (component.size() > 1 || self_loops.contains(v)) components.push_back(std::move(component));
    }
  };
  for (const auto& [v, targets] : adjacency) {
    if (!index.contains(v)) connect(v);
  }
  std::sort(components.begin(), components.end());
  for (auto& component : components) {
    report.violations.push_back({ViolationKind::DependsOnCycle,
                                 "dependsOn cycle among " + join_tokens(component), component,
                                 RelationId::DependsOn});
  }
}

void check_entities(const EntityGraph& graph, ValidationReport& report) {
  for (const auto& [token, e] : graph.entities()) {
    const std::string where = std::string(to_string(e.kind)) + " " + render_token(token);
    const bool is_type = e.kind == EntityKind::Type;
    if (e.type_kind.has_value() != is_type) {
      report.violations.push_back({ViolationKind::TypeKindPresence,
                                   where + (is_type ? " lacks a type kind" : " carries a type kind"),
                                   {token}, std::nullopt});
    }
    const bool is_method = e.kind == EntityKind::Method;
    if (e.method_kind.has_value() != is_method) {
      report.violations.push_back({ViolationKind::MethodKindPresence,
                                   where + (is_method ? " lacks a method kind" : " carries a method kind"),
                                   {token}, std::nullopt});
    }
    const bool accessible = is_type || is_member_kind(e.kind);
    if (e.accessibility.has_value() != accessible) {
      report.violations.push_back(
          {ViolationKind::AccessibilityPresence,
           where + (accessible ? " lacks an accessibility" : " carries an accessibility"), {token},
           std::nullopt});
    }
    const MemberCounts stored{e.instance_member_count, e.static_member_count};
    const MemberCounts expected = is_type ? count_members(graph, token) : MemberCounts{};
    if (stored != expected) {
      report.violations.push_back(
          {ViolationKind::MemberCount,
           where + " stores member counts (" + std::to_string(stored.instance) + ", " +
               std::to_string(stored.statics) + ") but declares (" + std::to_string(expected.instance) +
               ", " + std::to_string(expected.statics) + ")",
           {token}, std::nullopt});
    }
    if (is_type && e.is_static && e.type_kind == TypeKind::Class && e.instance_member_count > 0) {
      report.violations.push_back({ViolationKind::StaticClassInstanceMembers,
                                   where + " is a static class with instance members", {token},
                                   std::nullopt});
    }
  }
}

}  // namespace

ValidationReport validate_graph(const EntityGraph& graph) {
  ValidationReport report;
  check_edges(graph, report);
  check_declares(graph, report);
  check_depends_on(graph, report);
  check_entities(graph, report);
  return report;
}

std::vector<const Entity*> children(const EntityGraph& graph, const Token& token) {
  graph.at(token);
  std::vector<const Entity*> out;
  for (const Token& child : graph.declared_children(token)) {
    if (const Entity* e = graph.find(child)) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const Entity* a, const Entity* b) {
    const auto ka = sibling_key(a->kind, a->name, a->disambiguator);
    const auto kb = sibling_key(b->kind, b->name, b->disambiguator);
    if (ka != kb) return ka < kb;
    return a->token < b->token;
  });
  return out;
}

MemberCounts member_counts(const EntityGraph& graph, const Token& token) {
  const Entity& e = graph.at(token);
  if (e.kind != EntityKind::Type) {
    throw Error(ErrorCode::Kind, render_token(token) + " is a " + std::string(to_string(e.kind)) +
                                     ", not a type");
  }
  return count_members(graph, token);
}

}  // namespace codecarta
