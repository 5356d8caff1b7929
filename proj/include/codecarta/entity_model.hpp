// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "codecarta/entity_kind.hpp"
#include "codecarta/token.hpp"

namespace codecarta {

inline constexpr std::string_view kSchemaVersion = "codecarta-graph/1";

struct SourceLocation {
  std::string file;  // workspace-relative, '/' separated
  std::uint32_t line = 0;
  std::uint32_t column = 0;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

/// Inclusive [begin, end] range of (line, column) positions in one file.
struct SourceSpan {
  std::string file;
  std::uint32_t begin_line = 0;
  std::uint32_t begin_column = 0;
  std::uint32_t end_line = 0;
  std::uint32_t end_column = 0;

  bool contains(const SourceLocation& loc) const noexcept;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct Diagnostic {
  Severity severity = Severity::Hint;
  std::string code;
  std::string message;
  std::optional<SourceLocation> location;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Documentation comment reduced to plain paragraphs. Inline code spans are
/// kept as backtick-delimited runs inside the paragraph text.
struct DocComment {
  std::vector<std::string> paragraphs;

  /// Contents of every `code` span, in order of appearance.
  std::vector<std::string> code_spans() const;

  friend bool operator==(const DocComment&, const DocComment&) = default;
};

using Scalar = std::variant<bool, std::int64_t, double, std::string>;

struct Entity {
  Token token;
  std::string name;
  EntityKind kind = EntityKind::Solution;
  std::optional<TypeKind> type_kind;
  std::optional<MethodKind> method_kind;
  std::optional<Accessibility> accessibility;
  bool is_static = false;
  /// Tie-breaker among equally named siblings (rendered overload signature).
  std::string disambiguator;
  std::optional<DocComment> doc;
  std::vector<Diagnostic> diagnostics;
  std::uint32_t instance_member_count = 0;
  std::uint32_t static_member_count = 0;
  std::vector<SourceSpan> spans;
  std::map<std::string, Scalar> extra;

  std::uint32_t member_count() const noexcept { return instance_member_count + static_member_count; }
  bool has_severity(Severity severity) const noexcept;

  friend bool operator==(const Entity&, const Entity&) = default;
};

struct Edge {
  Token source;
  Token target;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using EntityMap = std::map<Token, Entity>;
using RelationMap = std::map<RelationId, std::set<Edge>>;

/// The mined codebase. Immutable once constructed; every relation id is
/// always present (possibly with an empty edge set).
class EntityGraph {
 public:
  EntityGraph();
  EntityGraph(EntityMap entities, RelationMap relations,
              std::string schema_version = std::string(kSchemaVersion));

  const std::string& schema_version() const noexcept { return schema_version_; }
  const EntityMap& entities() const noexcept { return entities_; }
  const RelationMap& relations() const noexcept { return relations_; }
  const std::set<Edge>& relation(RelationId id) const;

  std::size_t size() const noexcept { return entities_.size(); }
  bool contains(const Token& token) const { return entities_.contains(token); }
  const Entity* find(const Token& token) const;
  /// Throws Error(NotFound).
  const Entity& at(const Token& token) const;

  /// Raw declares-children (unsorted), as recorded by the declares relation.
  const std::vector<Token>& declared_children(const Token& token) const;
  std::optional<Token> declaring_parent(const Token& token) const;
  /// Tokens with no declares parent, in token order.
  std::vector<Token> roots() const;

  friend bool operator==(const EntityGraph& a, const EntityGraph& b) {
    return a.schema_version_ == b.schema_version_ && a.entities_ == b.entities_ &&
           a.relations_ == b.relations_;
  }

 private:
  std::string schema_version_;
  EntityMap entities_;
  RelationMap relations_;
  std::map<Token, std::vector<Token>> children_;
  std::map<Token, Token> parents_;
};

enum class ViolationKind {
  MissingEndpoint,
  MultipleParents,
  DeclaresCycle,
  RootNotSolution,
  KindRank,
  TokenMismatch,
  DependsOnCycle,
  TypeKindPresence,
  MethodKindPresence,
  AccessibilityPresence,
  MemberCount,
  StaticClassInstanceMembers,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string message;
  std::vector<Token> tokens;
  std::optional<RelationId> relation;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
  std::string summary() const;
};

/// Checks every structural invariant of an entity graph. Never throws;
/// each violated invariant is reported with the offending tokens.
ValidationReport validate_graph(const EntityGraph& graph);

/// Declares-children of `token`, ordered by the sibling key. Throws
/// Error(NotFound) for an unknown token.
std::vector<const Entity*> children(const EntityGraph& graph, const Token& token);

struct MemberCounts {
  std::uint32_t instance = 0;
  std::uint32_t statics = 0;

  friend bool operator==(const MemberCounts&, const MemberCounts&) = default;
};

/// Recounts the member-kind declares-children of a Type entity.
/// Throws Error(NotFound) or Error(Kind) for non-Type tokens.
MemberCounts member_counts(const EntityGraph& graph, const Token& token);

}  // namespace codecarta
