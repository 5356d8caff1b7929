// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codecarta/entity_model.hpp"

namespace codecarta {

// Mines a C++ workspace. A workspace is a directory with an optional
// workspace.json ({"name", "members": [dir or "dir/*"], "diagnostics"}) and
// one vcpkg.json per package ({"name", "dependencies"}). Without a
// workspace.json every vcpkg.json below the root is a package; without any
// manifest the root itself is the single package.

struct MinerConfig {
  std::filesystem::path root;
  /// fnmatch patterns, gitignore style: a pattern containing '/' matches the
  /// path relative to the root ('*' stops at '/'), any other pattern matches
  /// a single file or directory name. Matching a directory covers
  /// everything below it.
  std::vector<std::string> include_globs;
  std::vector<std::string> exclude_globs;
  std::optional<std::filesystem::path> diagnostics_file;
  std::size_t thread_count = 1;
  /// When false, external dependencies and unresolved references produce
  /// no Package nodes.
  bool follow_external_packages = true;
};

/// Source constructs the parser distinguishes.
enum class Construct {
  Workspace,
  Package,
  ExternalDependency,
  Namespace,
  Class,
  Struct,
  Union,
  Enum,
  Interface,        // class whose methods are all pure virtual, no data
  FunctionAlias,    // alias of a function, function pointer or std::function type
  TypeAlias,
  Concept,
  FreeFunction,
  Method,
  Constructor,
  Destructor,
  Operator,
  Getter,           // get_x / getX without a matching setter
  Setter,
  Field,            // data member
  Variable,         // namespace-scope variable
  Enumerator,
  Property,         // x() or get_x() paired with set_x()
  Signal,           // declared in a Qt `signals:` section
  Placeholder,      // file that could not be tokenised
};

std::string_view to_string(Construct construct) noexcept;

/// What the parser knows about one declaration besides its construct.
struct ConstructInfo {
  Construct construct = Construct::Class;
  /// "public", "protected" or "private" inside a class; empty at namespace scope.
  std::string access;
  bool static_keyword = false;
  /// Anonymous namespace, namespace-scope `static`, or a detail/internal namespace.
  bool internal_linkage = false;
  /// Class-likes only: at least one member and every member static.
  bool all_members_static = false;
};

struct MappedConstruct {
  EntityKind kind = EntityKind::Type;
  std::optional<TypeKind> type_kind;
  std::optional<MethodKind> method_kind;
  bool is_static = false;
  std::optional<Accessibility> accessibility;
  /// Set for constructs without a dedicated entity kind.
  std::optional<std::string> unmapped;
};

struct SourceMappingRow {
  Construct construct;
  EntityKind kind;
  std::optional<TypeKind> type_kind;
  std::string_view static_rule;
  std::string_view access_rule;
};

/// One row per Construct, in declaration order.
std::span<const SourceMappingRow> source_mapping();

MappedConstruct map_construct(const ConstructInfo& info);

/// Reduces a raw doc comment ("/// ...", "//! ...", "/** ... */") to
/// paragraphs. Inline code (`x`, @c x, \p x, <c>x</c>, <code>x</code>) is
/// kept as backtick spans; @param and @return start their own paragraph.
/// Absent when nothing but markup remains.
std::optional<DocComment> extract_doc_comment(std::string_view raw);

/// Attaches NDJSON diagnostics ({severity, code, message, file, line,
/// column}) to the deepest entity whose span contains the location; tied
/// depths go to the smallest span. Unmatched records go to the Project
/// whose "path" extra is the longest directory prefix of the file, else to
/// the Solution. Throws Error(Format) carrying the 1-based line number.
EntityGraph ingest_diagnostics(const EntityGraph& graph, std::string_view report);
EntityGraph ingest_diagnostics_file(const EntityGraph& graph, const std::filesystem::path& report);

/// Throws Error(Io) for an unreadable root, Error(EmptyWorkspace) when no
/// manifest and no source file is found and Error(Parameter) for a zero
/// thread count.
EntityGraph mine(const MinerConfig& config);

}  // namespace codecarta
