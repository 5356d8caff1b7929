// SPDX-License-Identifier: Apache-2.0
#include <array>

#include "codecarta/miner.hpp"

namespace codecarta {

namespace {

constexpr std::string_view kNoAccess = "none";
constexpr std::string_view kScoped = "class access, else internal linkage ? internal : public";

const std::array<SourceMappingRow, 25> kRows = {{
    {Construct::Workspace, EntityKind::Solution, std::nullopt, "false", kNoAccess},
    {Construct::Package, EntityKind::Project, std::nullopt, "false", kNoAccess},
    {Construct::ExternalDependency, EntityKind::Package, std::nullopt, "false", kNoAccess},
    {Construct::Namespace, EntityKind::Namespace, std::nullopt, "false", kNoAccess},
    {Construct::Class, EntityKind::Type, TypeKind::Class, "all members static", kScoped},
    {Construct::Struct, EntityKind::Type, TypeKind::Struct, "all members static", kScoped},
    {Construct::Union, EntityKind::Type, TypeKind::Struct, "all members static", kScoped},
    {Construct::Enum, EntityKind::Type, TypeKind::Enum, "false", kScoped},
    {Construct::Interface, EntityKind::Type, TypeKind::Interface, "false", kScoped},
    {Construct::FunctionAlias, EntityKind::Type, TypeKind::Delegate, "false", kScoped},
    {Construct::TypeAlias, EntityKind::Type, TypeKind::Class, "false", kScoped},
    {Construct::Concept, EntityKind::Type, TypeKind::Class, "false", kScoped},
    {Construct::FreeFunction, EntityKind::Method, std::nullopt, "true", kScoped},
    {Construct::Method, EntityKind::Method, std::nullopt, "static keyword", kScoped},
    {Construct::Constructor, EntityKind::Method, std::nullopt, "false", kScoped},
    {Construct::Destructor, EntityKind::Method, std::nullopt, "false", kScoped},
    {Construct::Operator, EntityKind::Method, std::nullopt, "static keyword or namespace scope", kScoped},
    {Construct::Getter, EntityKind::Method, std::nullopt, "static keyword", kScoped},
    {Construct::Setter, EntityKind::Method, std::nullopt, "static keyword", kScoped},
    {Construct::Field, EntityKind::Field, std::nullopt, "static keyword", kScoped},
    {Construct::Variable, EntityKind::Field, std::nullopt, "true", kScoped},
    {Construct::Enumerator, EntityKind::Field, std::nullopt, "true", "public"},
    {Construct::Property, EntityKind::Property, std::nullopt, "static keyword", kScoped},
    {Construct::Signal, EntityKind::Event, std::nullopt, "false", kScoped},
    {Construct::Placeholder, EntityKind::Type, TypeKind::Class, "false", "public"},
}};

Accessibility scoped_access(const ConstructInfo& info) {
  if (info.access == "private") return Accessibility::Private;
  if (info.access == "protected") return Accessibility::Protected;
  if (info.access == "public") return Accessibility::Public;
  return info.internal_linkage ? Accessibility::Internal : Accessibility::Public;
}

}  // namespace

std::string_view to_string(Construct construct) noexcept {
  switch (construct) {
    case Construct::Workspace: return "workspace";
    case Construct::Package: return "package";
    case Construct::ExternalDependency: return "external-dependency";
    case Construct::Namespace: return "namespace";
    case Construct::Class: return "class";
    case Construct::Struct: return "struct";
    case Construct::Union: return "union";
    case Construct::Enum: return "enum";
    case Construct::Interface: return "interface";
    case Construct::FunctionAlias: return "function-alias";
    case Construct::TypeAlias: return "type-alias";
    case Construct::Concept: return "concept";
    case Construct::FreeFunction: return "free-function";
    case Construct::Method: return "method";
    case Construct::Constructor: return "constructor";
    case Construct::Destructor: return "destructor";
    case Construct::Operator: return "operator";
    case Construct::Getter: return "getter";
    case Construct::Setter: return "setter";
    case Construct::Field: return "field";
    case Construct::Variable: return "variable";
    case Construct::Enumerator: return "enumerator";
    case Construct::Property: return "property";
    case Construct::Signal: return "signal";
    case Construct::Placeholder: return "placeholder";
  }
  return "";
}

std::span<const SourceMappingRow> source_mapping() { return kRows; }

MappedConstruct map_construct(const ConstructInfo& info) {
  const SourceMappingRow& row = kRows[static_cast<std::size_t>(info.construct)];
  MappedConstruct out;
  out.kind = row.kind;
  out.type_kind = row.type_kind;
  if (row.kind == EntityKind::Type || is_member_kind(row.kind)) {
    out.accessibility = info.construct == Construct::Enumerator || info.construct == Construct::Placeholder
                            ? Accessibility::Public
                            : scoped_access(info);
  }
  switch (info.construct) {
    case Construct::Class:
    case Construct::Struct:
    case Construct::Union:
      out.is_static = info.all_members_static;
      break;
    case Construct::TypeAlias:
    case Construct::Concept:
    case Construct::Placeholder:
      out.unmapped = std::string(to_string(info.construct));
      break;
    case Construct::FreeFunction:
      out.method_kind = MethodKind{};
      out.is_static = true;
      break;
    case Construct::Method:
      out.method_kind = MethodKind{};
      out.is_static = info.static_keyword;
      break;
    case Construct::Constructor:
      out.method_kind = MethodKind{MethodKind::Tag::Constructor, {}};
      break;
    case Construct::Destructor:
      out.method_kind = MethodKind::other("destructor");
      break;
    case Construct::Operator:
      out.method_kind = MethodKind{MethodKind::Tag::Operator, {}};
      out.is_static = info.static_keyword || info.access.empty();
      break;
    case Construct::Getter:
      out.method_kind = MethodKind{MethodKind::Tag::Getter, {}};
      out.is_static = info.static_keyword;
      break;
    case Construct::Setter:
      out.method_kind = MethodKind{MethodKind::Tag::Setter, {}};
      out.is_static = info.static_keyword;
      break;
    case Construct::Field:
    case Construct::Property:
      out.is_static = info.static_keyword;
      break;
    case Construct::Variable:
    case Construct::Enumerator:
      out.is_static = true;
      break;
    default:
      break;
  }
  return out;
}

}  // namespace codecarta
