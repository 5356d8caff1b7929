// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <regex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "codecarta/entity_model.hpp"

namespace codecarta::detail {

enum class ValueType { Bool, Number, String };

using Value = std::variant<bool, double, std::string>;

enum class Field {
  Name,
  Kind,
  TypeKind,
  MethodKind,
  Accessibility,
  IsStatic,
  MemberCount,
  InstanceMemberCount,
  StaticMemberCount,
  HasErrors,
  HasWarnings,
  HasDoc,
};

enum class Function { DocContains, Contains, StartsWith, EndsWith, Matches };

struct ExprNode {
  enum class Op { Literal, Field, Not, And, Or, Eq, Ne, Lt, Le, Gt, Ge, Call };
  Op op = Op::Literal;
  ValueType type = ValueType::Bool;
  std::size_t position = 0;
  Value literal;
  Field field = Field::Name;
  Function function = Function::Contains;
  std::shared_ptr<const std::regex> pattern;  // matches()
  std::vector<std::unique_ptr<ExprNode>> operands;
};

// Raised while evaluating; turned into a per-entity failure by the caller.
struct RuntimeFailure {
  std::string message;
};

/// Parses and type-checks an expression. Throws Error(Compile) or
/// Error(Name) with a byte offset.
std::unique_ptr<ExprNode> compile_expression(std::string_view source);

/// Throws RuntimeFailure.
bool evaluate_expression(const ExprNode& root, const Entity& entity);

extern const std::vector<std::string> kFieldNames;
extern const std::vector<std::string> kFunctionNames;

}  // namespace codecarta::detail
