// SPDX-License-Identifier: Apache-2.0
#include "codecarta/entity_kind.hpp"
#include "codecarta/error.hpp"

namespace codecarta {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view text, const std::array<Enum, N>& values) noexcept {
  for (Enum value : values) {
    if (to_string(value) == text) return value;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::Kind: return "kind";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Version: return "version";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Io: return "io";
    case ErrorCode::EmptyWorkspace: return "empty-workspace";
    case ErrorCode::Ambiguity: return "ambiguity";
    case ErrorCode::Pattern: return "pattern";
    case ErrorCode::Compile: return "compile";
    case ErrorCode::Name: return "name";
    case ErrorCode::Structure: return "structure";
    case ErrorCode::State: return "state";
    case ErrorCode::Format: return "format";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::Build: return "build";
    case ErrorCode::Usage: return "usage";
  }
  return "unknown";
}

std::string_view to_string(EntityKind kind) noexcept {
  switch (kind) {
    case EntityKind::Solution: return "solution";
    case EntityKind::Project: return "project";
    case EntityKind::Package: return "package";
    case EntityKind::Namespace: return "namespace";
    case EntityKind::Type: return "type";
    case EntityKind::Field: return "field";
    case EntityKind::Method: return "method";
    case EntityKind::Property: return "property";
    case EntityKind::Event: return "event";
  }
  return "";
}

std::string_view to_string(TypeKind kind) noexcept {
  switch (kind) {
    case TypeKind::Class: return "class";
    case TypeKind::Struct: return "struct";
    case TypeKind::Enum: return "enum";
    case TypeKind::Interface: return "interface";
    case TypeKind::Delegate: return "delegate";
  }
  return "";
}

std::string to_string(const MethodKind& kind) {
  switch (kind.tag) {
    case MethodKind::Tag::Ordinary: return "ordinary";
    case MethodKind::Tag::Constructor: return "constructor";
    case MethodKind::Tag::Getter: return "getter";
    case MethodKind::Tag::Setter: return "setter";
    case MethodKind::Tag::Operator: return "operator";
    case MethodKind::Tag::Other: return kind.label;
  }
  return "";
}

std::string_view to_string(Accessibility access) noexcept {
  switch (access) {
    case Accessibility::Public: return "public";
    case Accessibility::Internal: return "internal";
    case Accessibility::Protected: return "protected";
    case Accessibility::ProtectedInternal: return "protectedInternal";
    case Accessibility::PrivateProtected: return "privateProtected";
    case Accessibility::Private: return "private";
  }
  return "";
}

std::string_view to_string(Severity severity) noexcept {
  switch (severity) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Hint: return "hint";
  }
  return "";
}

std::string_view to_string(RelationId relation) noexcept {
  switch (relation) {
    case RelationId::Declares: return "declares";
    case RelationId::InheritsFrom: return "inheritsFrom";
    case RelationId::TypeOf: return "typeOf";
    case RelationId::Returns: return "returns";
    case RelationId::DependsOn: return "dependsOn";
  }
  return "";
}

std::optional<EntityKind> parse_entity_kind(std::string_view text) noexcept {
  return lookup(text, kAllEntityKinds);
}

std::optional<TypeKind> parse_type_kind(std::string_view text) noexcept {
  return lookup(text, kAllTypeKinds);
}

std::optional<MethodKind> parse_method_kind(std::string_view text) {
  using Tag = MethodKind::Tag;
  if (text.empty()) return std::nullopt;
  for (Tag tag : {Tag::Ordinary, Tag::Constructor, Tag::Getter, Tag::Setter, Tag::Operator}) {
    MethodKind kind{tag, {}};
    if (to_string(kind) == text) return kind;
  }
  return MethodKind::other(std::string(text));
}

std::optional<Accessibility> parse_accessibility(std::string_view text) noexcept {
  return lookup(text, kAllAccessibilities);
}

std::optional<Severity> parse_severity(std::string_view text) noexcept {
  return lookup(text, kAllSeverities);
}

std::optional<RelationId> parse_relation(std::string_view text) noexcept {
  return lookup(text, kAllRelations);
}

}  // namespace codecarta
