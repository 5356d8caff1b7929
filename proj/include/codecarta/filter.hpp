// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "codecarta/entity_model.hpp"
#include "codecarta/view_model.hpp"

namespace codecarta {

enum class QueryMode { FullText, Regex, Expression };

std::string_view to_string(QueryMode mode) noexcept;
std::optional<QueryMode> parse_query_mode(std::string_view text) noexcept;

struct Query {
  QueryMode mode = QueryMode::FullText;
  std::string source;
};

/// Outcome of applying a predicate to one entity. Expression queries can
/// fail at run time, for instance when reading typeKind of a method.
struct PredicateResult {
  bool match = false;
  std::optional<std::string> error;
};

namespace detail {
struct PredicateImpl;
}

/// A compiled query. Immutable and cheap to copy.
class Predicate {
 public:
  /// False for entities the query cannot be evaluated on.
  bool operator()(const Entity& entity) const { return test(entity).match; }
  PredicateResult test(const Entity& entity) const;
  const Query& query() const noexcept;

 private:
  friend Predicate compile_query(const Query& query);
  explicit Predicate(std::shared_ptr<const detail::PredicateImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::PredicateImpl> impl_;
};

/// FullText: case-insensitive substring of the name. Regex: ECMAScript
/// search over the name. Expression: the predicate language documented in
/// docs/expressions.md.
///
/// Throws Error(Parameter) for an empty source, Error(Pattern) with an
/// offset for an invalid regex, Error(Compile) with an offset for syntax
/// and type errors and Error(Name) listing the alternatives for unknown
/// fields or functions.
Predicate compile_query(const Query& query);

/// Fields an expression may reference.
const std::vector<std::string>& expression_fields();
const std::vector<std::string>& expression_functions();

struct Evaluation {
  std::set<Token> matches;
  /// First run-time error, reported once for the whole scope.
  std::optional<std::string> error;
  std::size_t failures = 0;
};

/// Matches among `scope`. Tokens outside the graph are ignored.
Evaluation evaluate(const Predicate& predicate, const EntityGraph& graph, const std::set<Token>& scope);

enum class MatchAction { Highlight, Isolate };

/// Highlight marks the matches and leaves visibility alone. Isolate keeps
/// the matches and their visible declares ancestors and removes every other
/// visible node. Matches outside the visible set are ignored.
ViewState apply(const EntityGraph& graph, const std::set<Token>& matches, MatchAction action, ViewState view);

struct PredefinedFilter {
  struct Parameter {
    std::string name;
    bool numeric = true;  // otherwise free text
  };
  std::string name;
  std::string description;
  std::vector<Parameter> parameters;
  std::string expression;  // with {0}, {1}... placeholders
};

const std::vector<PredefinedFilter>& predefined_filters();

/// Resolves a call such as "has-errors" or "large-types(25)" to an
/// expression query. Throws Error(Name) for unknown filters and
/// Error(Parameter) for a wrong argument count or a malformed argument.
Query predefined_query(std::string_view call);

}  // namespace codecarta
