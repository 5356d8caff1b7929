// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace codecarta {

// Closed vocabularies of the entity graph. Their lowercase/camelCase string
// forms are part of the interchange format and of the filter expression
// language; do not rename them.

enum class EntityKind { Solution, Project, Package, Namespace, Type, Field, Method, Property, Event };

inline constexpr std::array kAllEntityKinds = {
    EntityKind::Solution, EntityKind::Project,  EntityKind::Package,
    EntityKind::Namespace, EntityKind::Type,    EntityKind::Field,
    EntityKind::Method,   EntityKind::Property, EntityKind::Event,
};

/// Containment rank: Solution < Project < Package = Namespace < Type < members.
constexpr int kind_rank(EntityKind kind) noexcept {
  switch (kind) {
    case EntityKind::Solution: return 0;
    case EntityKind::Project: return 1;
    case EntityKind::Package:
    case EntityKind::Namespace: return 2;
    case EntityKind::Type: return 3;
    default: return 4;
  }
}

constexpr bool is_member_kind(EntityKind kind) noexcept { return kind_rank(kind) == 4; }

enum class TypeKind { Class, Struct, Enum, Interface, Delegate };

inline constexpr std::array kAllTypeKinds = {TypeKind::Class, TypeKind::Struct, TypeKind::Enum,
                                             TypeKind::Interface, TypeKind::Delegate};

/// Method kind; `Other` carries a free-form label such as "destructor".
struct MethodKind {
  enum class Tag { Ordinary, Constructor, Getter, Setter, Operator, Other };
  Tag tag = Tag::Ordinary;
  std::string label;  // only meaningful for Other

  static MethodKind other(std::string label) { return {Tag::Other, std::move(label)}; }

  friend bool operator==(const MethodKind&, const MethodKind&) = default;
};

enum class Accessibility { Public, Internal, Protected, ProtectedInternal, PrivateProtected, Private };

inline constexpr std::array kAllAccessibilities = {
    Accessibility::Public,           Accessibility::Internal,
    Accessibility::Protected,        Accessibility::ProtectedInternal,
    Accessibility::PrivateProtected, Accessibility::Private,
};

enum class Severity { Error, Warning, Hint };

inline constexpr std::array kAllSeverities = {Severity::Error, Severity::Warning, Severity::Hint};

enum class RelationId { Declares, InheritsFrom, TypeOf, Returns, DependsOn };

inline constexpr std::array kAllRelations = {RelationId::Declares, RelationId::InheritsFrom,
                                             RelationId::TypeOf, RelationId::Returns,
                                             RelationId::DependsOn};

std::string_view to_string(EntityKind kind) noexcept;
std::string_view to_string(TypeKind kind) noexcept;
std::string to_string(const MethodKind& kind);
std::string_view to_string(Accessibility access) noexcept;
std::string_view to_string(Severity severity) noexcept;
std::string_view to_string(RelationId relation) noexcept;

std::optional<EntityKind> parse_entity_kind(std::string_view text) noexcept;
std::optional<TypeKind> parse_type_kind(std::string_view text) noexcept;
/// Known tags parse to themselves; any other non-empty label becomes Other.
std::optional<MethodKind> parse_method_kind(std::string_view text);
std::optional<Accessibility> parse_accessibility(std::string_view text) noexcept;
std::optional<Severity> parse_severity(std::string_view text) noexcept;
std::optional<RelationId> parse_relation(std::string_view text) noexcept;

}  // namespace codecarta
