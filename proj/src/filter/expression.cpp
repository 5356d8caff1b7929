// SPDX-License-Identifier: Apache-2.0
#include "expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "codecarta/error.hpp"
#include "regex_check.hpp"

namespace codecarta::detail {

const std::vector<std::string> kFieldNames = {
    "name",        "kind",          "typeKind",         "methodKind", "accessibility",
    "isStatic",    "memberCount",   "instanceMemberCount", "staticMemberCount",
    "hasErrors",   "hasWarnings",   "hasDoc",
};

const std::vector<std::string> kFunctionNames = {"docContains", "contains", "startsWith", "endsWith", "matches"};

namespace {

std::string_view type_name(ValueType t) {
  switch (t) {
    case ValueType::Bool: return "boolean";
    case ValueType::Number: return "number";
    case ValueType::String: return "string";
  }
  return "";
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

[[noreturn]] void fail(std::size_t position, const std::string& message) {
  throw Error(ErrorCode::Compile, message + " at offset " + std::to_string(position), position);
}

enum class Tok { Ident, Number, String, LParen, RParen, Comma, Not, And, Or, Eq, Ne, Lt, Le, Gt, Ge, End };

struct Token_ {
  Tok kind = Tok::End;
  std::size_t position = 0;
  std::string text;
  double number = 0.0;
};

std::vector<Token_> lex(std::string_view src) {
  std::vector<Token_> out;
  std::size_t i = 0;
  auto push = [&](Tok kind, std::size_t at, std::size_t len) {
    out.push_back({kind, at, std::string(src.substr(at, len)), 0.0});
    i = at + len;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const auto next = i + 1 < src.size() ? src[i + 1] : '\0';
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      push(Tok::Ident, i, j - i);
      continue;
    }
    const bool signed_number = c == '-' && std::isdigit(static_cast<unsigned char>(next));
    if (std::isdigit(static_cast<unsigned char>(c)) || signed_number) {
      std::size_t j = i + (signed_number ? 1 : 0);
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        if (j >= src.size() || !std::isdigit(static_cast<unsigned char>(src[j]))) fail(j, "digit expected after '.'");
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      Token_ t{Tok::Number, i, std::string(src.substr(i, j - i)), 0.0};
      const auto result = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (result.ec != std::errc()) fail(i, "number out of range");
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    if (c == '"' || c == '\'') {
      std::string text;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < src.size()) {
        const char d = src[j];
        if (d == c) {
          closed = true;
          ++j;
          break;
        }
        if (d == '\\') {
          if (j + 1 >= src.size()) break;
          const char e = src[j + 1];
          switch (e) {
            case 'n': text += '\n'; break;
            case 't': text += '\t'; break;
            case '\\': text += '\\'; break;
            case '"': text += '"'; break;
            case '\'': text += '\''; break;
            default: fail(j, std::string("unknown escape '\\") + e + "'");
          }
          j += 2;
          continue;
        }
        text += d;
        ++j;
      }
      if (!closed) fail(i, "unterminated string");
      out.push_back({Tok::String, i, std::move(text), 0.0});
      i = j;
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, i, 1); continue;
      case ')': push(Tok::RParen, i, 1); continue;
      case ',': push(Tok::Comma, i, 1); continue;
      case '&':
        if (next != '&') fail(i, "'&&' expected");
        push(Tok::And, i, 2);
        continue;
      case '|':
        if (next != '|') fail(i, "'||' expected");
        push(Tok::Or, i, 2);
        continue;
      case '=':
        if (next != '=') fail(i, "'==' expected");
        push(Tok::Eq, i, 2);
        continue;
      case '!':
        if (next == '=') push(Tok::Ne, i, 2);
        else push(Tok::Not, i, 1);
        continue;
      case '<':
        if (next == '=') push(Tok::Le, i, 2);
        else push(Tok::Lt, i, 1);
        continue;
      case '>':
        if (next == '=') push(Tok::Ge, i, 2);
        else push(Tok::Gt, i, 1);
        continue;
      default: fail(i, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, src.size(), "", 0.0});
  return out;
}

std::optional<Field> field_named(std::string_view name) {
  for (std::size_t k = 0; k < kFieldNames.size(); ++k) {
    if (kFieldNames[k] == name) return static_cast<Field>(k);
  }
  return std::nullopt;
}

std::optional<Function> function_named(std::string_view name) {
  for (std::size_t k = 0; k < kFunctionNames.size(); ++k) {
    if (kFunctionNames[k] == name) return static_cast<Function>(k);
  }
  return std::nullopt;
}

ValueType field_type(Field f) {
  switch (f) {
    case Field::Name:
    case Field::Kind:
    case Field::TypeKind:
    case Field::MethodKind:
    case Field::Accessibility: return ValueType::String;
    case Field::MemberCount:
    case Field::InstanceMemberCount:
    case Field::StaticMemberCount: return ValueType::Number;
    default: return ValueType::Bool;
  }
}

using NodePtr = std::unique_ptr<ExprNode>;

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(lex(src)) {}

  NodePtr parse() {
    NodePtr root = parse_or();
    if (peek().kind != Tok::End) fail(peek().position, "unexpected '" + peek().text + "'");
    if (root->type != ValueType::Bool) {
      fail(root->position, "query must be boolean, found " + std::string(type_name(root->type)));
    }
    return root;
  }

 private:
  const Token_& peek() const { return tokens_[at_]; }
  const Token_& take() { return tokens_[at_++]; }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      fail(peek().position, std::string(what) + " expected" +
                                (peek().kind == Tok::End ? std::string(" at end of query") : ", found '" + peek().text + "'"));
    }
    ++at_;
  }

  static void require(const ExprNode& n, ValueType type, const char* context) {
    if (n.type != type) {
      fail(n.position, std::string(context) + " needs a " + std::string(type_name(type)) + ", found " +
                           std::string(type_name(n.type)));
    }
  }

  static NodePtr binary(ExprNode::Op op, std::size_t pos, NodePtr a, NodePtr b, ValueType type) {
    auto n = std::make_unique<ExprNode>();
    n->op = op;
    n->position = pos;
    n->type = type;
    n->operands.push_back(std::move(a));
    n->operands.push_back(std::move(b));
    return n;
  }

  NodePtr parse_or() {
    NodePtr left = parse_and();
    while (peek().kind == Tok::Or) {
      const std::size_t pos = take().position;
      NodePtr right = parse_and();
      require(*left, ValueType::Bool, "'||'");
      require(*right, ValueType::Bool, "'||'");
      left = binary(ExprNode::Op::Or, pos, std::move(left), std::move(right), ValueType::Bool);
    }
    return left;
  }

  NodePtr parse_and() {
    NodePtr left = parse_cmp();
    while (peek().kind == Tok::And) {
      const std::size_t pos = take().position;
      NodePtr right = parse_cmp();
      require(*left, ValueType::Bool, "'&&'");
      require(*right, ValueType::Bool, "'&&'");
      left = binary(ExprNode::Op::And, pos, std::move(left), std::move(right), ValueType::Bool);
    }
    return left;
  }

  NodePtr parse_cmp() {
    NodePtr left = parse_term();
    ExprNode::Op op;
    switch (peek().kind) {
      case Tok::Eq: op = ExprNode::Op::Eq; break;
      case Tok::Ne: op = ExprNode::Op::Ne; break;
      case Tok::Lt: op = ExprNode::Op::Lt; break;
      case Tok::Le: op = ExprNode::Op::Le; break;
      case Tok::Gt: op = ExprNode::Op::Gt; break;
      case Tok::Ge: op = ExprNode::Op::Ge; break;
      default: return left;
    }
    const Token_& tok = take();
    NodePtr right = parse_term();
    const bool equality = op == ExprNode::Op::Eq || op == ExprNode::Op::Ne;
    if (equality) {
      if (left->type != right->type) {
        fail(tok.position, "cannot compare " + std::string(type_name(left->type)) + " with " +
                               std::string(type_name(right->type)));
      }
      check_vocabulary(*left, *right);
      check_vocabulary(*right, *left);
    } else {
      require(*left, ValueType::Number, ("'" + tok.text + "'").c_str());
      require(*right, ValueType::Number, ("'" + tok.text + "'").c_str());
    }
    if (peek().kind >= Tok::Eq && peek().kind <= Tok::Ge) {
      fail(peek().position, "comparisons do not chain; use parentheses");
    }
    return binary(op, tok.position, std::move(left), std::move(right), ValueType::Bool);
  }

  // Comparing a closed-vocabulary field against a literal outside the
  // vocabulary can never match, so it is rejected up front.
  static void check_vocabulary(const ExprNode& field, const ExprNode& literal) {
    if (field.op != ExprNode::Op::Field || literal.op != ExprNode::Op::Literal) return;
    if (!std::holds_alternative<std::string>(literal.literal)) return;
    const auto& text = std::get<std::string>(literal.literal);
    bool known = true;
    std::vector<std::string> allowed;
    switch (field.field) {
      case Field::Kind:
        known = parse_entity_kind(text).has_value();
        for (auto k : kAllEntityKinds) allowed.emplace_back(to_string(k));
        break;
      case Field::TypeKind:
        known = parse_type_kind(text).has_value();
        for (auto k : kAllTypeKinds) allowed.emplace_back(to_string(k));
        break;
      case Field::Accessibility:
        known = parse_accessibility(text).has_value();
        for (auto k : kAllAccessibilities) allowed.emplace_back(to_string(k));
        break;
      default: return;
    }
    if (!known) {
      fail(literal.position, "'" + text + "' is not a " + kFieldNames[static_cast<std::size_t>(field.field)] +
                                 " value (expected one of " + join(allowed) + ")");
    }
  }

  NodePtr parse_term() {
    const Token_& tok = peek();
    auto node = std::make_unique<ExprNode>();
    node->position = tok.position;
    switch (tok.kind) {
      case Tok::Number:
        take();
        node->op = ExprNode::Op::Literal;
        node->type = ValueType::Number;
        node->literal = tok.number;
        return node;
      case Tok::String:
        take();
        node->op = ExprNode::Op::Literal;
        node->type = ValueType::String;
        node->literal = tok.text;
        return node;
      case Tok::Not: {
        take();
        NodePtr inner = parse_term();
        require(*inner, ValueType::Bool, "'!'");
        node->op = ExprNode::Op::Not;
        node->type = ValueType::Bool;
        node->operands.push_back(std::move(inner));
        return node;
      }
      case Tok::LParen: {
        take();
        NodePtr inner = parse_or();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        take();
        if (peek().kind == Tok::LParen) return parse_call(tok);
        if (tok.text == "true" || tok.text == "false") {
          node->op = ExprNode::Op::Literal;
          node->type = ValueType::Bool;
          node->literal = tok.text == "true";
          return node;
        }
        const auto field = field_named(tok.text);
        if (!field) {
          throw Error(ErrorCode::Name,
                      "unknown field '" + tok.text + "' at offset " + std::to_string(tok.position) +
                          " (fields: " + join(kFieldNames) + ")",
                      tok.position);
        }
        node->op = ExprNode::Op::Field;
        node->field = *field;
        node->type = field_type(*field);
        return node;
      }
      case Tok::End: fail(tok.position, "operand expected at end of query");
      default: fail(tok.position, "operand expected, found '" + tok.text + "'");
    }
  }

  NodePtr parse_call(const Token_& name) {
    const auto fn = function_named(name.text);
    if (!fn) {
      throw Error(ErrorCode::Name,
                  "unknown function '" + name.text + "' at offset " + std::to_string(name.position) +
                      " (functions: " + join(kFunctionNames) + ")",
                  name.position);
    }
    expect(Tok::LParen, "'('");
    auto node = std::make_unique<ExprNode>();
    node->op = ExprNode::Op::Call;
    node->function = *fn;
    node->position = name.position;
    node->type = ValueType::Bool;
    if (peek().kind != Tok::RParen) {
      node->operands.push_back(parse_or());
      while (peek().kind == Tok::Comma) {
        take();
        node->operands.push_back(parse_or());
      }
    }
    expect(Tok::RParen, "')'");
    const std::size_t arity = *fn == Function::DocContains ? 1 : 2;
    if (node->operands.size() != arity) {
      fail(name.position, name.text + " takes " + std::to_string(arity) + " argument" + (arity == 1 ? "" : "s"));
    }
    for (const auto& arg : node->operands) require(*arg, ValueType::String, (name.text + "()").c_str());
    if (*fn == Function::Matches) {
      const ExprNode& pattern = *node->operands[1];
      if (pattern.op != ExprNode::Op::Literal) fail(pattern.position, "matches() needs a literal pattern");
      const auto& text = std::get<std::string>(pattern.literal);
      if (auto problem = check_regex(text)) {
        // Points into the literal; exact unless the literal contains escapes.
        throw Error(ErrorCode::Pattern, "invalid pattern: " + problem->message, pattern.position + 1 + problem->position);
      }
      try {
        node->pattern = std::make_shared<const std::regex>(text, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw Error(ErrorCode::Pattern, std::string("invalid pattern: ") + e.what(), pattern.position);
      }
    }
    return node;
  }

  std::vector<Token_> tokens_;
  std::size_t at_ = 0;
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Value read_field(Field f, const Entity& e) {
  auto absent = [&](const char* field) -> Value {
    throw RuntimeFailure{std::string(field) + " is not defined for " + std::string(to_string(e.kind)) + " entities"};
  };
  switch (f) {
    case Field::Name: return e.name;
    case Field::Kind: return std::string(to_string(e.kind));
    case Field::TypeKind:
      if (!e.type_kind) return absent("typeKind");
      return std::string(to_string(*e.type_kind));
    case Field::MethodKind:
      if (!e.method_kind) return absent("methodKind");
      return to_string(*e.method_kind);
    case Field::Accessibility:
      if (!e.accessibility) return absent("accessibility");
      return std::string(to_string(*e.accessibility));
    case Field::IsStatic: return e.is_static;
    case Field::MemberCount: return static_cast<double>(e.member_count());
    case Field::InstanceMemberCount: return static_cast<double>(e.instance_member_count);
    case Field::StaticMemberCount: return static_cast<double>(e.static_member_count);
    case Field::HasErrors: return e.has_severity(Severity::Error);
    case Field::HasWarnings: return e.has_severity(Severity::Warning);
    case Field::HasDoc: return e.doc.has_value() && !e.doc->paragraphs.empty();
  }
  return false;
}

Value eval(const ExprNode& n, const Entity& e) {
  using Op = ExprNode::Op;
  switch (n.op) {
    case Op::Literal: return n.literal;
    case Op::Field: return read_field(n.field, e);
    case Op::Not: return !std::get<bool>(eval(*n.operands[0], e));
    case Op::And: return std::get<bool>(eval(*n.operands[0], e)) && std::get<bool>(eval(*n.operands[1], e));
    case Op::Or: return std::get<bool>(eval(*n.operands[0], e)) || std::get<bool>(eval(*n.operands[1], e));
    case Op::Eq: return eval(*n.operands[0], e) == eval(*n.operands[1], e);
    case Op::Ne: return eval(*n.operands[0], e) != eval(*n.operands[1], e);
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: {
      const double a = std::get<double>(eval(*n.operands[0], e));
      const double b = std::get<double>(eval(*n.operands[1], e));
      if (n.op == Op::Lt) return a < b;
      if (n.op == Op::Le) return a <= b;
      if (n.op == Op::Gt) return a > b;
      return a >= b;
    }
    case Op::Call: {
      const std::string a = std::get<std::string>(eval(*n.operands[0], e));
      switch (n.function) {
        case Function::DocContains: {
          if (!e.doc) return false;
          const std::string needle = lower(a);
          for (const auto& p : e.doc->paragraphs) {
            if (lower(p).find(needle) != std::string::npos) return true;
          }
          return false;
        }
        case Function::Matches:
          try {
            return std::regex_search(a, *n.pattern);
          } catch (const std::regex_error& err) {
            throw RuntimeFailure{std::string("pattern evaluation failed: ") + err.what()};
          }
        default: break;
      }
      const std::string b = std::get<std::string>(eval(*n.operands[1], e));
      if (n.function == Function::Contains) return a.find(b) != std::string::npos;
      if (n.function == Function::StartsWith) return a.starts_with(b);
      return a.ends_with(b);
    }
  }
  return false;
}

}  // namespace

std::unique_ptr<ExprNode> compile_expression(std::string_view source) { return Parser(source).parse(); }

bool evaluate_expression(const ExprNode& root, const Entity& entity) { return std::get<bool>(eval(root, entity)); }

}  // namespace codecarta::detail
