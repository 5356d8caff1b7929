// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "codecarta/miner.hpp"
#include "lexer.hpp"

namespace codecarta::miner {

struct Range {
  std::uint32_t begin_line = 0;
  std::uint32_t begin_column = 0;
  std::uint32_t end_line = 0;
  std::uint32_t end_column = 0;
};

// A function or data declaration, inside a class or at namespace scope.
struct ParsedMember {
  Construct construct = Construct::Method;
  std::string name;
  std::string disambiguator;  // "(int,const Foo&) const" for functions
  std::string access;         // empty at namespace scope
  bool is_static = false;
  bool is_function = false;
  bool is_pure = false;
  std::size_t param_count = 0;
  std::string type;  // data type or return type
  std::vector<std::string> type_refs;
  std::vector<std::string> param_refs;
  std::optional<std::string> doc;
  Range span;
};

struct ParsedType {
  Construct construct = Construct::Class;
  std::vector<std::string> ns;
  std::vector<std::string> outer;  // enclosing classes, outermost first
  std::string name;
  std::string access;
  bool internal = false;
  std::vector<std::string> bases;
  std::vector<ParsedMember> members;
  std::string aliased;
  std::vector<std::string> alias_refs;
  std::optional<std::string> doc;
  Range span;
};

struct ParsedFree {
  std::vector<std::string> ns;
  bool internal = false;
  ParsedMember member;  // FreeFunction, Operator or Variable
};

// Definition whose declarator is qualified, e.g. `void Foo::bar() {}`.
struct ParsedOutOfLine {
  std::vector<std::string> ns;
  std::vector<std::string> qualifier;
  ParsedMember member;
};

struct ParsedNamespace {
  std::vector<std::string> path;
  std::optional<std::string> doc;
  Range span;
};

struct ParseProblem {
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::string message;
  std::vector<std::string> ns;
  std::vector<std::string> outer;
};

struct ParsedFile {
  std::vector<ParsedNamespace> namespaces;
  std::vector<ParsedType> types;
  std::vector<ParsedFree> free;
  std::vector<ParsedOutOfLine> out_of_line;
  /// `using namespace` targets as written, with the namespace they appear in.
  std::vector<std::pair<std::vector<std::string>, std::string>> using_namespaces;
  /// Short name to qualified name: namespace aliases and using-declarations.
  std::vector<std::pair<std::string, std::string>> aliases;
  std::vector<ParseProblem> problems;
  std::uint32_t last_line = 1;
};

/// Recovers from malformed declarations by skipping to the next `;` or
/// balanced block; every recovery is recorded as a problem.
ParsedFile parse(const LexedFile& file);

}  // namespace codecarta::miner
