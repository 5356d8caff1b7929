// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <charconv>
#include <regex>

#include "codecarta/error.hpp"
#include "codecarta/filter.hpp"
#include "expression.hpp"
#include "regex_check.hpp"

namespace codecarta {

namespace detail {

struct PredicateImpl {
  Query query;
  std::string needle;  // lower-cased, FullText
  std::optional<std::regex> pattern;
  std::unique_ptr<ExprNode> expression;
};

}  // namespace detail

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(QueryMode mode) noexcept {
  switch (mode) {
    case QueryMode::FullText: return "fullText";
    case QueryMode::Regex: return "regex";
    case QueryMode::Expression: return "expression";
  }
  return "";
}

std::optional<QueryMode> parse_query_mode(std::string_view text) noexcept {
  if (text == "fullText" || text == "text") return QueryMode::FullText;
  if (text == "regex") return QueryMode::Regex;
  if (text == "expression" || text == "expr") return QueryMode::Expression;
  return std::nullopt;
}

PredicateResult Predicate::test(const Entity& entity) const {
  const auto& impl = *impl_;
  switch (impl.query.mode) {
    case QueryMode::FullText: return {ascii_lower(entity.name).find(impl.needle) != std::string::npos, std::nullopt};
    case QueryMode::Regex:
      try {
        return {std::regex_search(entity.name, *impl.pattern), std::nullopt};
      } catch (const std::regex_error& e) {
        return {false, std::string("pattern evaluation failed: ") + e.what()};
      }
    case QueryMode::Expression:
      try {
        return {detail::evaluate_expression(*impl.expression, entity), std::nullopt};
      } catch (const detail::RuntimeFailure& failure) {
        return {false, failure.message};
      }
  }
  return {};
}

const Query& Predicate::query() const noexcept { return impl_->query; }

Predicate compile_query(const Query& query) {
  const bool blank = std::all_of(query.source.begin(), query.source.end(),
                                 [](unsigned char c) { return std::isspace(c) != 0; });
  if (blank) throw Error(ErrorCode::Parameter, "empty query");
  auto impl = std::make_shared<detail::PredicateImpl>();
  impl->query = query;
  switch (query.mode) {
    case QueryMode::FullText: impl->needle = ascii_lower(query.source); break;
    case QueryMode::Regex:
      if (auto problem = detail::check_regex(query.source)) {
        throw Error(ErrorCode::Pattern,
                    "invalid pattern: " + problem->message + " at offset " + std::to_string(problem->position),
                    problem->position);
      }
      try {
        impl->pattern.emplace(query.source, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw Error(ErrorCode::Pattern, std::string("invalid pattern: ") + e.what(), query.source.size());
      }
      break;
    case QueryMode::Expression: impl->expression = detail::compile_expression(query.source); break;
  }
  return Predicate(std::move(impl));
}

const std::vector<std::string>& expression_fields() { return detail::kFieldNames; }
const std::vector<std::string>& expression_functions() { return detail::kFunctionNames; }

Evaluation evaluate(const Predicate& predicate, const EntityGraph& graph, const std::set<Token>& scope) {
  Evaluation out;
  for (const Token& token : scope) {
    const Entity* entity = graph.find(token);
    if (entity == nullptr) continue;
    auto result = predicate.test(*entity);
    if (result.error) {
      ++out.failures;
      if (!out.error) out.error = render_token(token) + ": " + *result.error;
    }
    if (result.match) out.matches.insert(out.matches.end(), token);
  }
  return out;
}

ViewState apply(const EntityGraph& graph, const std::set<Token>& matches, MatchAction action, ViewState view) {
  std::set<Token> hits;
  std::set_intersection(matches.begin(), matches.end(), view.visible.begin(), view.visible.end(),
                        std::inserter(hits, hits.end()));
  if (action == MatchAction::Highlight) {
    view.highlighted = std::move(hits);
    return view;
  }
  std::set<Token> keep = hits;
  for (const Token& t : hits) {
    for (auto a = graph.declaring_parent(t); a; a = graph.declaring_parent(*a)) {
      if (!view.visible.contains(*a)) continue;
      if (!keep.insert(*a).second) break;
    }
  }
  for (const Token& t : view.visible) {
    if (!keep.contains(t)) view.removed.insert(t);
  }
  view.visible = std::move(keep);
  std::erase_if(view.highlighted, [&](const Token& t) { return !view.visible.contains(t); });
  return view;
}

const std::vector<PredefinedFilter>& predefined_filters() {
  static const std::vector<PredefinedFilter> filters = {
      {"has-errors", "Entities with at least one error diagnostic", {}, "hasErrors"},
      {"has-warnings", "Entities with at least one warning diagnostic", {}, "hasWarnings"},
      {"large-types", "Types with more than n members", {{"n", true}}, "kind == \"type\" && memberCount > {0}"},
      {"undocumented-types", "Types without a doc comment", {}, "kind == \"type\" && !hasDoc"},
      {"public-types", "Public types", {}, "kind == \"type\" && accessibility == \"public\""},
      {"static-types", "Static types", {}, "kind == \"type\" && isStatic"},
      {"doc-mentions", "Entities whose doc comment mentions a word", {{"word", false}}, "docContains({0})"},
  };
  return filters;
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

Query predefined_query(std::string_view call) {
  const std::string text = trim(call);
  const auto open = text.find('(');
  const std::string name = trim(std::string_view(text).substr(0, open));
  std::vector<std::string> args;
  if (open != std::string::npos) {
    if (text.back() != ')') throw Error(ErrorCode::Parameter, "missing ')' in filter call '" + text + "'");
    const std::string inner = text.substr(open + 1, text.size() - open - 2);
    if (!trim(inner).empty()) {
      std::size_t start = 0;
      while (true) {
        const auto comma = inner.find(',', start);
        args.push_back(trim(std::string_view(inner).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
  }
  const auto& all = predefined_filters();
  const auto it = std::find_if(all.begin(), all.end(), [&](const PredefinedFilter& f) { return f.name == name; });
  if (it == all.end()) {
    std::string names;
    for (const auto& f : all) names += (names.empty() ? "" : ", ") + f.name;
    throw Error(ErrorCode::Name, "unknown filter '" + name + "' (filters: " + names + ")");
  }
  if (args.size() != it->parameters.size()) {
    throw Error(ErrorCode::Parameter, "filter '" + name + "' takes " + std::to_string(it->parameters.size()) +
                                          " argument(s), got " + std::to_string(args.size()));
  }
  std::string expr = it->expression;
  for (std::size_t k = 0; k < args.size(); ++k) {
    std::string value = args[k];
    if (it->parameters[k].numeric) {
      double parsed = 0.0;
      const auto r = std::from_chars(value.data(), value.data() + value.size(), parsed);
      if (r.ec != std::errc() || r.ptr != value.data() + value.size()) {
        throw Error(ErrorCode::Parameter, "argument '" + it->parameters[k].name + "' of '" + name + "' must be a number");
      }
    } else {
      value = quote(value);
    }
    const std::string slot = "{" + std::to_string(k) + "}";
    for (auto pos = expr.find(slot); pos != std::string::npos; pos = expr.find(slot, pos + value.size())) {
      expr.replace(pos, slot.size(), value);
    }
  }
  return {QueryMode::Expression, expr};
}

}  // namespace codecarta
