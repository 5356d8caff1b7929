// SPDX-License-Identifier: Apache-2.0
#include "parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string_view>

namespace codecarta::miner {

namespace {

using Indices = std::vector<std::size_t>;

const std::set<std::string_view> kSpecifiers = {
    "static", "inline", "virtual", "constexpr", "consteval", "constinit", "extern",
    "mutable", "thread_local", "register", "__forceinline", "__inline", "_Noreturn",
};

// Words that never name a declared entity or a referenced type.
const std::set<std::string_view> kNonNames = {
    "const", "volatile", "typename", "struct", "class", "enum", "union", "unsigned", "signed",
    "long", "short", "int", "char", "bool", "void", "float", "double", "auto", "wchar_t",
    "char8_t", "char16_t", "char32_t", "decltype", "sizeof", "alignof", "noexcept", "static",
    "inline", "constexpr", "mutable", "register", "template", "operator", "true", "false",
    "nullptr", "this", "requires", "new", "delete", "return", "__int128", "size_t",
    "ssize_t", "ptrdiff_t", "intptr_t", "uintptr_t", "max_align_t", "nullptr_t", "int8_t",
    "int16_t", "int32_t", "int64_t", "uint8_t", "uint16_t", "uint32_t", "uint64_t",
    "intmax_t", "uintmax_t", "va_list", "FILE",
};

const std::set<std::string_view> kBuiltinTypes = {
    "void", "bool", "char", "char8_t", "char16_t", "char32_t", "wchar_t", "short", "int",
    "long", "float", "double", "signed", "unsigned", "auto", "const", "volatile",
};

// Tokens after which an all-caps word at the start of a declaration is
// read as a macro rather than a type.
const std::set<std::string_view> kDeclarationStarters = {
    "class", "struct", "union", "enum", "void", "bool", "char", "int", "short", "long",
    "unsigned", "signed", "float", "double", "auto", "inline", "static", "virtual", "explicit",
    "constexpr", "consteval", "const", "typename", "template", "friend", "public", "protected",
    "private", "signals", "typedef", "using", "namespace", "extern", "mutable", "operator",
};

const std::set<std::string_view> kInternalNamespaces = {"detail", "details", "internal", "impl", "priv"};

bool is_macro_name(std::string_view s) {
  if (s.size() < 2 || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  bool letter = false;
  for (char c : s) {
    if (std::isupper(static_cast<unsigned char>(c))) {
      letter = true;
    } else if (!std::isdigit(static_cast<unsigned char>(c)) && c != '_') {
      return false;
    }
  }
  return letter;
}

bool word_like(const Tok& t) {
  return t.kind == Tok::Kind::Ident || t.kind == Tok::Kind::Number || t.kind == Tok::Kind::String ||
         t.kind == Tok::Kind::Char;
}

std::string base_name(std::string_view name) {
  const auto lt = name.find('<');
  return std::string(lt == std::string_view::npos ? name : name.substr(0, lt));
}

class Parser {
 public:
  explicit Parser(const LexedFile& file) : t_(file.tokens), docs_(file.docs) { out_.last_line = file.last_line; }

  ParsedFile run() {
    Ctx ctx;
    declarations(ctx, false);
    std::erase_if(out_.types, [](const ParsedType& p) { return p.name.empty(); });
    return std::move(out_);
  }

 private:
  struct Ctx {
    std::vector<std::string> ns;
    std::vector<std::string> outer;
    bool internal = false;
    std::vector<std::string> tparams;
    int cls = -1;  // index into out_.types
    std::string access;
    bool signals = false;
  };

  struct Fail {
    std::size_t at;
    std::string message;
  };

  const Tok& tok(std::size_t k = 0) const {
    const std::size_t j = i_ + k;
    return j < t_.size() ? t_[j] : t_.back();
  }
  bool at(std::string_view s, std::size_t k = 0) const {
    const Tok& t = tok(k);
    return t.kind != Tok::Kind::End && t.is(s);
  }
  bool at_end() const { return tok().kind == Tok::Kind::End; }
  bool at_attribute() const { return at("[") && at("[", 1); }

  [[noreturn]] void fail(std::string message) const { throw Fail{i_, std::move(message)}; }

  void expect(std::string_view s) {
    if (!at(s)) fail("expected '" + std::string(s) + "'");
    ++i_;
  }

  Range span(std::size_t begin, std::size_t end) const {
    end = std::min(end, t_.size() - 1);
    return {t_[begin].line, t_[begin].column, t_[end].end_line, t_[end].end_column};
  }

  void problem(std::size_t index, std::string message, const Ctx& ctx) {
    const Tok& t = t_[std::min(index, t_.size() - 1)];
    out_.problems.push_back({t.line, t.column, std::move(message), ctx.ns, ctx.outer});
  }

  std::optional<std::string> doc_before(std::size_t index) {
    if (t_[index].doc_before >= 0) return docs_[static_cast<std::size_t>(t_[index].doc_before)];
    return carried_doc_;
  }

  std::optional<std::string> doc_after(std::size_t index) const {
    if (index < t_.size() && t_[index].doc_after >= 0) return docs_[static_cast<std::size_t>(t_[index].doc_after)];
    return std::nullopt;
  }

  // Skips a bracketed group starting at the current token; any of (), [] and
  // {} nest inside each other. Returns the index of the closing token.
  std::size_t skip_balanced(Indices* record = nullptr) {
    const std::size_t open = i_;
    int depth = 0;
    while (true) {
      const Tok& t = tok();
      if (t.kind == Tok::Kind::End) throw Fail{open, "unbalanced '" + t_[open].text + "'"};
      if (record) record->push_back(i_);
      if (t.kind == Tok::Kind::Punct) {
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
      }
      ++i_;
      if (depth == 0) return i_ - 1;
    }
  }

  // Skips a template argument list starting at '<'.
  void skip_angles(Indices* record = nullptr) {
    const std::size_t open = i_;
    int depth = 0;
    while (true) {
      const Tok& t = tok();
      if (t.kind == Tok::Kind::End || at(";") || at("{") || at("}")) {
        throw Fail{open, "unterminated template argument list"};
      }
      if (at("(") || at("[")) {
        skip_balanced(record);
        continue;
      }
      if (record) record->push_back(i_);
      if (at("<")) ++depth;
      if (at(">")) --depth;
      ++i_;
      if (depth == 0) return;
    }
  }

  void skip_to_semicolon() {
    while (!at_end()) {
      if (at(";")) {
        ++i_;
        return;
      }
      if (at("}")) return;
      if (at("{") || at("(") || at("[")) {
        skip_balanced();
        continue;
      }
      ++i_;
    }
  }

  // Skips an initializer up to a top-level ',' or ';'. '<' after a name is
  // read as a template bracket so that `std::map<int, int>{}` stays whole.
  void skip_initializer() {
    int angle = 0;
    while (!at_end()) {
      if (at(";") || at("}") || at(")")) return;
      if (at(",") && angle == 0) return;
      if (at("(") || at("[") || at("{")) {
        skip_balanced();
        continue;
      }
      if (at("<") && i_ > 0 && t_[i_ - 1].ident()) ++angle;
      if (at(">") && angle > 0) --angle;
      ++i_;
    }
  }

  void skip_attributes() {
    while (true) {
      if (at_attribute()) {
        skip_balanced();
      } else if (at("alignas") || at("__attribute__") || at("__declspec") || at("_Alignas")) {
        ++i_;
        if (at("(")) skip_balanced();
      } else {
        return;
      }
    }
  }

  void skip_requires() {
    ++i_;
    while (true) {
      while (at("!")) ++i_;
      if (at("requires")) {
        ++i_;
        if (at("(")) skip_balanced();
        if (at("{")) skip_balanced();
      } else if (at("(")) {
        skip_balanced();
      } else if (tok().ident()) {
        ++i_;
        while (true) {
          if (at("<")) {
            skip_angles();
          } else if (at("::") && tok(1).ident()) {
            i_ += 2;
          } else {
            break;
          }
        }
        if (at("(")) skip_balanced();
      } else {
        fail("malformed requires clause");
      }
      if ((at("&") && at("&", 1)) || (at("|") && at("|", 1))) {
        i_ += 2;
        continue;
      }
      return;
    }
  }

  std::string read_qualified_name() {
    std::string name;
    if (at("::")) {
      name = "::";
      ++i_;
    }
    if (!tok().ident()) fail("expected a name");
    name += tok().text;
    ++i_;
    while (at("::") && tok(1).ident()) {
      name += "::" + tok(1).text;
      i_ += 2;
    }
    return name;
  }

  std::string render(const Indices& list) const {
    std::string out;
    const Tok* prev = nullptr;
    for (std::size_t k : list) {
      const Tok& t = t_[k];
      if (prev && word_like(*prev) && word_like(t)) out += ' ';
      out += t.text;
      prev = &t;
    }
    return out;
  }

  std::vector<std::string> refs(const Indices& list, const std::vector<std::string>& tparams) const {
    std::vector<std::string> found;
    refs_into(list, 0, list.size(), tparams, found);
    return found;
  }

  void refs_into(const Indices& list, std::size_t k, std::size_t n, const std::vector<std::string>& tparams,
                 std::vector<std::string>& found) const {
    auto text = [&](std::size_t j) -> const std::string& { return t_[list[j]].text; };
    auto punct = [&](std::size_t j, std::string_view s) {
      return j < n && t_[list[j]].kind == Tok::Kind::Punct && t_[list[j]].text == s;
    };
    while (k < n) {
      const Tok& t = t_[list[k]];
      if (!t.ident()) {
        ++k;
        continue;
      }
      if (kNonNames.contains(t.text)) {
        const bool call = t.text == "decltype" || t.text == "sizeof" || t.text == "noexcept" || t.text == "alignof";
        ++k;
        if (call && punct(k, "(")) {
          int depth = 0;
          do {
            if (punct(k, "(")) ++depth;
            if (punct(k, ")")) --depth;
            ++k;
          } while (k < n && depth > 0);
        }
        continue;
      }
      // The name inside a `(*name)` declarator is not a type.
      if (k >= 2 && (punct(k - 1, "*") || punct(k - 1, "&")) && punct(k - 2, "(") && punct(k + 1, ")")) {
        ++k;
        continue;
      }
      std::string name = (k > 0 && punct(k - 1, "::") && (k < 2 || !t_[list[k - 2]].ident())) ? "::" : "";
      name += text(k);
      ++k;
      while (true) {
        if (punct(k, "<")) {
          const std::size_t begin = k + 1;
          int depth = 0;
          while (k < n) {
            if (punct(k, "<")) ++depth;
            if (punct(k, ">")) --depth;
            ++k;
            if (depth == 0) break;
          }
          refs_into(list, begin, k - 1, tparams, found);
          continue;
        }
        if (punct(k, "::") && k + 1 < n && t_[list[k + 1]].ident()) {
          if (text(k + 1) == "template") {
            k += 2;
            continue;
          }
          name += "::" + text(k + 1);
          k += 2;
          continue;
        }
        break;
      }
      std::string_view first = name;
      if (first.starts_with("::")) first.remove_prefix(2);
      first = first.substr(0, first.find("::"));
      if (std::find(tparams.begin(), tparams.end(), first) != tparams.end()) continue;
      if (std::find(found.begin(), found.end(), name) == found.end()) found.push_back(std::move(name));
    }
  }

  // ---------------------------------------------------------------------

  void declarations(Ctx& ctx, bool braced) {
    while (true) {
      if (at_end()) {
        if (braced) problem(i_, "missing '}'", ctx);
        return;
      }
      if (at("}")) {
        if (braced) return;
        problem(i_, "unmatched '}'", ctx);
        ++i_;
        continue;
      }
      const std::size_t before = i_;
      try {
        declaration(ctx);
      } catch (const Fail& f) {
        problem(f.at, f.message, ctx);
        carried_doc_.reset();
        recover(before);
      }
    }
  }

  void recover(std::size_t before) {
    i_ = before;
    while (!at_end()) {
      if (at(";")) {
        ++i_;
        return;
      }
      if (at("}")) {
        if (i_ == before) ++i_;
        return;
      }
      if (at("{")) {
        try {
          skip_balanced();
        } catch (const Fail&) {
          i_ = t_.size() - 1;
          return;
        }
        if (at(";")) ++i_;
        return;
      }
      ++i_;
    }
  }

  bool macro_followed() const {
    const Tok& next = tok(1);
    if (next.kind == Tok::Kind::End) return true;
    if (next.line > tok().line) return true;
    if (next.ident()) {
      if (kDeclarationStarters.contains(next.text) || is_macro_name(next.text)) return true;
      const Tok& after = tok(2);
      return after.ident() || after.is("::") || after.is("<") || after.is("*") || after.is("&");
    }
    return next.is("}") || next.is(";") || next.is("~");
  }

  void declaration(Ctx& ctx) {
    const std::size_t start = i_;
    std::optional<std::string> doc = doc_before(start);
    carried_doc_.reset();
    skip_attributes();
    if (at(";")) {
      ++i_;
      return;
    }
    const Tok& t0 = tok();
    if (t0.ident()) {
      const std::string& w = t0.text;
      if (w == "namespace" || (w == "inline" && at("namespace", 1))) {
        if (w == "inline") ++i_;
        return namespace_decl(ctx, start, doc);
      }
      if (w == "export") {
        ++i_;
        carried_doc_ = doc;
        return;
      }
      if (w == "module" || w == "import" || w == "static_assert") return skip_to_semicolon();
      if (w == "using") return using_decl(ctx, start, doc, {});
      if (w == "typedef") return typedef_decl(ctx, start, doc);
      if (w == "template") return template_decl(ctx, start, doc);
      if (w == "friend") return skip_friend();
      if (w == "extern" && at("template", 1)) return skip_to_semicolon();
      if (w == "extern" && tok(1).kind == Tok::Kind::String) {
        i_ += 2;
        if (at("{")) {
          ++i_;
          declarations(ctx, true);
          if (!at_end()) ++i_;
        } else {
          carried_doc_ = doc;
        }
        return;
      }
      if (ctx.cls >= 0 && (w == "public" || w == "protected" || w == "private")) {
        std::size_t j = 1;
        if (at("slots", 1) || at("Q_SLOTS", 1)) j = 2;
        if (at(":", j)) {
          ctx.access = w;
          ctx.signals = false;
          i_ += j + 1;
          return;
        }
      }
      if (ctx.cls >= 0 && (w == "signals" || w == "Q_SIGNALS") && at(":", 1)) {
        ctx.access = "public";
        ctx.signals = true;
        i_ += 2;
        return;
      }
      if (w == "class" || w == "struct" || w == "union" || w == "enum") {
        if (class_or_enum(ctx, start, doc, {}, false)) return;
      } else if (is_macro_name(w)) {
        if (at("(", 1)) {
          ++i_;
          skip_balanced();
          if (at(";")) {
            ++i_;
          } else if (at("{")) {
            skip_balanced();
          }
          carried_doc_ = doc;
          return;
        }
        if (macro_followed()) {
          ++i_;
          carried_doc_ = doc;
          return;
        }
      }
    }
    simple_declaration(ctx, start, doc, {});
  }

  void skip_friend() {
    ++i_;
    while (!at_end()) {
      if (at(";")) {
        ++i_;
        return;
      }
      if (at("}")) return;
      if (at("{")) {
        skip_balanced();
        if (at(";")) ++i_;
        return;
      }
      if (at("(") || at("[")) {
        skip_balanced();
        continue;
      }
      ++i_;
    }
  }

  void namespace_decl(Ctx& ctx, std::size_t start, const std::optional<std::string>& doc) {
    ++i_;
    std::vector<std::string> comps;
    while (tok().ident()) {
      if (at("inline")) {
        ++i_;
        continue;
      }
      comps.push_back(tok().text);
      ++i_;
      if (!at("::")) break;
      ++i_;
    }
    skip_attributes();
    if (at("=")) {
      if (comps.size() != 1) fail("malformed namespace alias");
      ++i_;
      const std::string target = read_qualified_name();
      expect(";");
      out_.aliases.emplace_back(comps.front(), target);
      return;
    }
    expect("{");
    Ctx inner;
    inner.ns = ctx.ns;
    inner.ns.insert(inner.ns.end(), comps.begin(), comps.end());
    inner.internal = ctx.internal || comps.empty() ||
                     std::any_of(comps.begin(), comps.end(), [](const std::string& c) { return kInternalNamespaces.contains(c); });
    declarations(inner, true);
    const std::size_t end = at_end() ? i_ - 1 : i_;
    if (!at_end()) ++i_;
    if (!comps.empty()) out_.namespaces.push_back({inner.ns, doc, span(start, end)});
  }

  std::vector<std::string> template_params() {
    Indices list;
    skip_angles(&list);
    std::vector<std::string> names;
    // Split the recorded tokens (minus the outer brackets) at top-level commas.
    int depth = 0;
    std::string candidate;
    bool in_default = false;
    for (std::size_t k = 1; k + 1 < list.size(); ++k) {
      const Tok& t = t_[list[k]];
      if (t.is("<") || t.is("(") || t.is("[") || t.is("{")) ++depth;
      if (t.is(">") || t.is(")") || t.is("]") || t.is("}")) --depth;
      if (depth != 0) continue;
      if (t.is(",")) {
        if (!candidate.empty()) names.push_back(candidate);
        candidate.clear();
        in_default = false;
        continue;
      }
      if (t.is("=")) in_default = true;
      if (!in_default && t.ident() && !kNonNames.contains(t.text)) candidate = t.text;
    }
    if (!candidate.empty()) names.push_back(candidate);
    return names;
  }

  void template_decl(Ctx& ctx, std::size_t start, const std::optional<std::string>& doc) {
    ++i_;
    if (!at("<")) return skip_to_semicolon();
    std::vector<std::string> params = template_params();
    while (at("template") && at("<", 1)) {
      ++i_;
      auto more = template_params();
      params.insert(params.end(), more.begin(), more.end());
    }
    if (at("requires")) skip_requires();
    skip_attributes();
    if (at("concept")) {
      ++i_;
      if (!tok().ident()) fail("expected a concept name");
      ParsedType p;
      p.construct = Construct::Concept;
      p.ns = ctx.ns;
      p.outer = ctx.outer;
      p.name = tok().text;
      p.internal = ctx.internal;
      p.doc = doc;
      ++i_;
      skip_to_semicolon();
      p.span = span(start, i_ - 1);
      out_.types.push_back(std::move(p));
      return;
    }
    if (at("friend")) return skip_friend();
    if (at("using")) return using_decl(ctx, start, doc, params);
    if (at("class") || at("struct") || at("union") || at("enum")) {
      if (class_or_enum(ctx, start, doc, params, false)) return;
    }
    simple_declaration(ctx, start, doc, params);
  }

  static std::vector<std::string> joined(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  bool is_function_type(const Indices& list) const {
    int angle = 0;
    for (std::size_t k : list) {
      const Tok& t = t_[k];
      if (t.is("<")) ++angle;
      if (t.is(">")) --angle;
      if (t.is("(") && angle == 0) return true;
    }
    std::string head;
    for (std::size_t k : list) {
      const Tok& t = t_[k];
      if (t.is("const") || t.is("typename")) continue;
      if (t.is("<")) break;
      head += t.text;
    }
    if (head.starts_with("::")) head.erase(0, 2);
    return head == "std::function" || head == "function" || head == "std::move_only_function" ||
           head == "std::copyable_function" || head == "std::function_ref";
  }

  void add_alias(const Ctx& ctx, std::size_t start, const std::optional<std::string>& doc, std::string name,
                 const Indices& target, bool function, const std::vector<std::string>& tparams, std::size_t end) {
    // Member type aliases are implementation detail; function aliases are not.
    if (ctx.cls >= 0 && !function) return;
    ParsedType p;
    p.construct = function ? Construct::FunctionAlias : Construct::TypeAlias;
    p.ns = ctx.ns;
    p.outer = ctx.outer;
    p.name = std::move(name);
    p.access = ctx.cls >= 0 ? ctx.access : "";
    p.internal = ctx.internal;
    p.aliased = render(target);
    p.alias_refs = refs(target, joined(ctx.tparams, tparams));
    p.doc = doc ? doc : doc_after(end);
    p.span = span(start, end);
    out_.types.push_back(std::move(p));
  }

  // Collects tokens up to the terminating ';', which is left unconsumed.
  Indices until_semicolon() {
    Indices list;
    while (!at(";")) {
      if (at_end() || at("}")) fail("expected ';'");
      if (at("(") || at("[") || at("{")) {
        skip_balanced(&list);
        continue;
      }
      list.push_back(i_);
      ++i_;
    }
    return list;
  }

  void using_decl(Ctx& ctx, std::size_t start, const std::optional<std::string>& doc,
                  const std::vector<std::string>& tparams) {
    ++i_;
    if (at("namespace")) {
      ++i_;
      const std::string name = read_qualified_name();
      expect(";");
      if (ctx.cls < 0) out_.using_namespaces.emplace_back(ctx.ns, name);
      return;
    }
    if (at("enum")) return skip_to_semicolon();
    if (tok().ident() && (at("=", 1) || at_attribute_after_name())) {
      std::string name = tok().text;
      ++i_;
      skip_attributes();
      expect("=");
      const Indices target = until_semicolon();
      const std::size_t end = i_;
      ++i_;
      add_alias(ctx, start, doc, std::move(name), target, is_function_type(target), tparams, end);
      return;
    }
    if (at("typename")) ++i_;
    const std::string name = read_qualified_name();
    skip_to_semicolon();
    const auto cut = name.rfind("::");
    if (ctx.cls < 0 && cut != std::string::npos) out_.aliases.emplace_back(name.substr(cut + 2), name);
  }

  bool at_attribute_after_name() const { return at("[", 1) && at("[", 2); }

  void typedef_decl(Ctx& ctx, std::size_t start, const std::optional<std::string>& doc) {
    ++i_;
    if (at("class") || at("struct") || at("union") || at("enum")) {
      if (class_or_enum(ctx, start, doc, {}, true)) return;
    }
    const Indices list = until_semicolon();
    const std::size_t end = i_;
    ++i_;
    // First declarator only: `typedef int A, *B;` is rare in headers.
    Indices first;
    int depth = 0;
    for (std::size_t k : list) {
      const Tok& t = t_[k];
      if (t.is("(") || t.is("[") || t.is("<") || t.is("{")) ++depth;
      if (t.is(")") || t.is("]") || t.is(">") || t.is("}")) --depth;
      if (depth == 0 && t.is(",")) break;
      first.push_back(k);
    }
    std::size_t name_at = first.size();
    bool function = false;
    for (std::size_t k = 0; k < first.size(); ++k) {
      if (!t_[first[k]].is("(")) continue;
      function = true;
      // `R (*Name)(Args)` or `R Name(Args)`.
      std::size_t j = k + 1;
      while (j < first.size() && (t_[first[j]].is("*") || t_[first[j]].is("&") || t_[first[j]].is("^"))) ++j;
      if (j < first.size() && j > k + 1 && t_[first[j]].ident() && j + 1 < first.size() && t_[first[j + 1]].is(")")) {
        name_at = j;
      } else if (k > 0 && t_[first[k - 1]].ident()) {
        name_at = k - 1;
      }
      break;
    }
    if (!function) {
      for (std::size_t k = first.size(); k-- > 0;) {
        if (t_[first[k]].is("[")) continue;
        if (t_[first[k]].ident() && !kNonNames.contains(t_[first[k]].text)) {
          name_at = k;
          break;
        }
      }
    }
    if (name_at >= first.size()) throw Fail{start, "malformed typedef"};
    Indices target;
    for (std::size_t k = 0; k < first.size(); ++k) {
      if (k != name_at) target.push_back(first[k]);
    }
    function = function || is_function_type(target);
    add_alias(ctx, start, doc, t_[first[name_at]].text, target, function, {}, end);
  }

  // Names declared after a class or enum body, up to (not including) ';'.
  std::vector<std::pair<std::string, std::size_t>> trailing_declarators() {
    std::vector<std::pair<std::string, std::size_t>> names;
    while (!at_end() && !at(";") && !at("}")) {
      if (at("=")) {
        ++i_;
        skip_initializer();
        continue;
      }
      if (at("{") || at("(") || at("[")) {
        skip_balanced();
        continue;
      }
      if (tok().ident() && !kNonNames.contains(tok().text)) {
        const Tok& next = tok(1);
        if (next.is(",") || next.is(";") || next.is("=") || next.is("[") || next.is("{") || next.is("(")) {
          names.emplace_back(tok().text, i_);
        }
      }
      ++i_;
    }
    return names;
  }

  void add_data(Ctx& ctx, const std::string& name, const std::string& type, std::vector<std::string> type_refs,
                bool is_static, std::optional<std::string> doc, Range where) {
    ParsedMember m;
    m.name = name;
    m.type = type;
    m.type_refs = std::move(type_refs);
    m.doc = std::move(doc);
    m.span = where;
    if (ctx.cls >= 0) {
      m.construct = Construct::Field;
      m.access = ctx.access;
      m.is_static = is_static;
      out_.types[static_cast<std::size_t>(ctx.cls)].members.push_back(std::move(m));
    } else {
      m.construct = Construct::Variable;
      m.is_static = true;
      out_.free.push_back({ctx.ns, ctx.internal || is_static, std::move(m)});
    }
  }

  bool class_or_enum(Ctx& ctx, std::size_t start, const std::optional<std::string>& doc,
                     const std::vector<std::string>& tparams, bool typedef_mode) {
    if (at("enum")) return enum_decl(ctx, start, doc, typedef_mode);
    const std::size_t key_index = i_;
    const std::string key = tok().text;
    ++i_;
    while (true) {
      skip_attributes();
      if (tok().ident() && is_macro_name(tok().text) && tok(1).ident()) {
        ++i_;
        continue;
      }
      break;
    }
    std::vector<std::string> quals;
    std::string name;
    if (tok().ident() && !at("final")) {
      auto component = [&] {
        std::string c = tok().text;
        ++i_;
        if (at("<")) {
          Indices args;
          skip_angles(&args);
          c += render(args);
        }
        return c;
      };
      name = component();
      while (at("::") && tok(1).ident()) {
        quals.push_back(name);
        ++i_;
        name = component();
      }
    }
    if (at("final") || at("sealed")) ++i_;
    if (at(";") && !name.empty() && !typedef_mode) {
      ++i_;
      return true;
    }
    if (!at("{") && !at(":")) {
      i_ = key_index;
      return false;
    }
    const std::vector<std::string> scope_tparams = joined(ctx.tparams, tparams);
    std::vector<std::string> bases;
    if (at(":")) {
      ++i_;
      while (true) {
        while (at("virtual") || at("public") || at("protected") || at("private")) ++i_;
        Indices base;
        while (!at(",") && !at("{")) {
          if (at_end() || at(";") || at("}")) fail("malformed base clause");
          if (at("<")) {
            skip_angles(&base);
            continue;
          }
          if (at("(")) {
            skip_balanced(&base);
            continue;
          }
          base.push_back(i_);
          ++i_;
        }
        // Only the base itself, not its template arguments.
        Indices head;
        int depth = 0;
        for (std::size_t k : base) {
          if (t_[k].is("<")) ++depth;
          if (depth == 0 && !t_[k].is("...")) head.push_back(k);
          if (t_[k].is(">")) --depth;
        }
        for (auto& r : refs(head, scope_tparams)) {
          if (std::find(bases.begin(), bases.end(), r) == bases.end()) bases.push_back(r);
        }
        if (at(",")) {
          ++i_;
          continue;
        }
        break;
      }
    }
    expect("{");
    const std::size_t index = out_.types.size();
    {
      ParsedType p;
      p.construct = key == "class" ? Construct::Class : key == "struct" ? Construct::Struct : Construct::Union;
      p.ns = ctx.ns;
      p.outer = joined(ctx.outer, quals);
      p.name = name;
      p.access = ctx.cls >= 0 ? ctx.access : "";
      p.internal = ctx.internal;
      p.bases = std::move(bases);
      p.doc = doc;
      out_.types.push_back(std::move(p));
    }
    Ctx inner;
    inner.ns = ctx.ns;
    inner.outer = joined(ctx.outer, quals);
    inner.outer.push_back(name.empty() ? "<anonymous>" : name);
    inner.internal = ctx.internal;
    inner.tparams = scope_tparams;
    inner.cls = static_cast<int>(index);
    inner.access = key == "class" ? "private" : "public";
    declarations(inner, true);
    const std::size_t end = at_end() ? i_ - 1 : i_;
    if (!at_end()) ++i_;
    out_.types[index].span = span(start, end);
    const auto declarators = trailing_declarators();
    if (!at(";") && !at_end()) fail("expected ';' after class definition");
    const std::size_t semi = i_;
    if (at(";")) ++i_;
    if (!out_.types[index].doc) out_.types[index].doc = doc_after(semi);

    ParsedType& self = out_.types[index];
    if (typedef_mode) {
      if (name.empty() && !declarators.empty()) self.name = declarators.front().first;
      return true;
    }
    if (name.empty()) {
      const std::string type = "<anonymous " + key + ">";
      if (declarators.empty() && ctx.cls >= 0) {
        // Members of an anonymous union or struct belong to the enclosing class.
        std::vector<ParsedMember> moved;
        for (auto& m : self.members) {
          if (m.construct == Construct::Field) moved.push_back(std::move(m));
        }
        self.name.clear();
        auto& host = out_.types[static_cast<std::size_t>(ctx.cls)].members;
        for (auto& m : moved) host.push_back(std::move(m));
      } else {
        self.name.clear();
        for (const auto& [n, at_index] : declarators) {
          add_data(ctx, n, type, {}, false, std::nullopt, span(at_index, at_index));
        }
      }
      return true;
    }
    for (const auto& [n, at_index] : declarators) {
      add_data(ctx, n, name, {name}, false, std::nullopt, span(at_index, at_index));
    }
    return true;
  }

  bool enum_decl(Ctx& ctx, std::size_t start, const std::optional<std::string>& doc, bool typedef_mode) {
    const std::size_t key_index = i_;
    ++i_;
    if (at("class") || at("struct")) ++i_;
    skip_attributes();
    std::string name;
    if (tok().ident()) {
      name = tok().text;
      ++i_;
      while (at("::") && tok(1).ident()) {
        name = tok(1).text;
        i_ += 2;
      }
    }
    if (at(":")) {
      ++i_;
      while (!at("{") && !at(";")) {
        if (at_end() || at("}")) fail("malformed enum base");
        ++i_;
      }
    }
    if (at(";") && !name.empty() && !typedef_mode) {
      ++i_;
      return true;
    }
    if (!at("{")) {
      i_ = key_index;
      return false;
    }
    ++i_;
    std::vector<ParsedMember> enumerators;
    while (!at("}")) {
      if (at_end()) fail("unterminated enum");
      if (!tok().ident()) fail("malformed enumerator");
      ParsedMember m;
      m.construct = Construct::Enumerator;
      m.name = tok().text;
      m.access = "public";
      m.is_static = true;
      m.type = name;
      const std::size_t begin = i_;
      ++i_;
      skip_attributes();
      if (at("=")) {
        ++i_;
        skip_initializer();
      }
      std::size_t last = i_ - 1;
      m.doc = doc_before(begin);
      if (at(",")) {
        if (!m.doc) m.doc = doc_after(i_);
        ++i_;
      }
      if (!m.doc) m.doc = doc_after(last);
      m.span = span(begin, last);
      enumerators.push_back(std::move(m));
      if (!at("}") && !tok().ident()) fail("malformed enumerator");
    }
    const std::size_t end = i_;
    ++i_;
    const auto declarators = trailing_declarators();
    if (!at(";") && !at_end()) fail("expected ';' after enum definition");
    if (at(";")) ++i_;
    if (name.empty() && typedef_mode && !declarators.empty()) name = declarators.front().first;
    if (name.empty()) {
      for (auto& m : enumerators) add_data(ctx, m.name, "int", {}, true, m.doc, m.span);
      return true;
    }
    for (auto& m : enumerators) m.type = name;
    ParsedType p;
    p.construct = Construct::Enum;
    p.ns = ctx.ns;
    p.outer = ctx.outer;
    p.name = name;
    p.access = ctx.cls >= 0 ? ctx.access : "";
    p.internal = ctx.internal;
    p.members = std::move(enumerators);
    p.doc = doc;
    p.span = span(start, end);
    out_.types.push_back(std::move(p));
    if (!typedef_mode) {
      for (const auto& [n, at_index] : declarators) {
        add_data(ctx, n, name, {name}, false, std::nullopt, span(at_index, at_index));
      }
    }
    return true;
  }

  // Reads `operator X` starting at the `operator` token; returns the name.
  std::string operator_name() {
    ++i_;
    if (at("(") && at(")", 1)) {
      i_ += 2;
      return "operator()";
    }
    if (at("[") && at("]", 1)) {
      i_ += 2;
      return "operator[]";
    }
    Indices parts;
    bool words = false;
    int angle = 0;
    while (!at_end() && !(at("(") && angle == 0)) {
      if (at(";") || at("{") || at("}")) fail("malformed operator name");
      if (tok().ident()) words = true;
      if (words && at("<")) ++angle;
      if (words && at(">")) --angle;
      if (at("[") && at("]", 1)) {
        parts.push_back(i_);
        parts.push_back(i_ + 1);
        i_ += 2;
        continue;
      }
      parts.push_back(i_);
      ++i_;
    }
    if (parts.empty()) fail("malformed operator name");
    const std::string text = render(parts);
    return words ? "operator " + text : "operator" + text;
  }

  struct Params {
    std::vector<Indices> list;
    Indices all;
  };

  Params parameters() {
    Params out;
    ++i_;  // '('
    Indices current;
    int depth = 0;
    int angle = 0;
    bool in_default = false;
    while (true) {
      if (at_end()) fail("unterminated parameter list");
      if (depth == 0 && at(")")) {
        ++i_;
        break;
      }
      if (at("(") || at("[") || at("{")) ++depth;
      if (at(")") || at("]") || at("}")) --depth;
      if (depth == 0 && angle == 0 && at(",")) {
        out.list.push_back(std::move(current));
        current.clear();
        in_default = false;
        ++i_;
        continue;
      }
      if (depth == 0 && angle == 0 && at("=")) in_default = true;
      if (!in_default) {
        if (at("<") && i_ > 0 && t_[i_ - 1].ident()) ++angle;
        if (at(">") && angle > 0) --angle;
        current.push_back(i_);
      }
      ++i_;
    }
    if (!current.empty() || !out.list.empty()) out.list.push_back(std::move(current));
    if (out.list.size() == 1 && out.list[0].size() == 1 && t_[out.list[0][0]].is("void")) out.list.clear();
    for (Indices& p : out.list) {
      // Drop the parameter name.
      std::size_t name_end = p.size();
      if (name_end >= 2 && t_[p[name_end - 1]].is("]")) {
        std::size_t k = name_end;
        while (k > 0 && !t_[p[k - 1]].is("[")) --k;
        if (k > 0) name_end = k - 1;
      }
      if (name_end >= 2 && name_end <= p.size()) {
        const Tok& last = t_[p[name_end - 1]];
        const Tok& before = t_[p[name_end - 2]];
        if (last.ident() && !kBuiltinTypes.contains(last.text) && !kNonNames.contains(last.text) && !before.is("::") &&
            !before.is("(")) {
          p.erase(p.begin() + static_cast<std::ptrdiff_t>(name_end - 1));
        }
      }
      out.all.insert(out.all.end(), p.begin(), p.end());
    }
    return out;
  }

  // Walks back over `a::b<...>::` preceding head[pos]; returns the
  // qualifier components and the index where the qualified name starts.
  std::pair<std::vector<std::string>, std::size_t> qualifier_before(const Indices& head, std::size_t pos) const {
    std::vector<std::string> comps;
    while (pos >= 2 && t_[head[pos - 1]].is("::")) {
      std::size_t j = pos - 2;
      if (t_[head[j]].is(">")) {
        int depth = 0;
        while (true) {
          if (t_[head[j]].is(">")) ++depth;
          if (t_[head[j]].is("<")) --depth;
          if (depth == 0 || j == 0) break;
          --j;
        }
        if (j == 0) break;
        --j;
      }
      if (!t_[head[j]].ident()) break;
      comps.insert(comps.begin(), t_[head[j]].text);
      pos = j;
    }
    if (pos >= 1 && t_[head[pos - 1]].is("::")) --pos;
    return {comps, pos};
  }

  void simple_declaration(Ctx& ctx, std::size_t start, const std::optional<std::string>& doc,
                          const std::vector<std::string>& tparams) {
    bool is_static = false;
    Indices head;
    std::optional<std::string> op;
    std::optional<std::size_t> grouped_name;
    while (true) {
      const Tok& t = tok();
      if (t.kind == Tok::Kind::End) fail("unexpected end of file");
      if (at_attribute()) {
        skip_balanced();
        continue;
      }
      if (t.ident()) {
        if (t.text == "alignas" || t.text == "__attribute__" || t.text == "__declspec" || t.text == "explicit") {
          ++i_;
          if (at("(")) skip_balanced();
          continue;
        }
        if (kSpecifiers.contains(t.text)) {
          if (t.text == "static") is_static = true;
          ++i_;
          continue;
        }
        if (t.text == "operator") {
          op = operator_name();
          break;
        }
        if (t.text == "decltype" || t.text == "typeof" || t.text == "__typeof__" || t.text == "_Atomic") {
          head.push_back(i_);
          ++i_;
          if (at("(")) skip_balanced(&head);
          continue;
        }
        if (t.text == "requires") fail("unexpected requires clause");
        head.push_back(i_);
        ++i_;
        continue;
      }
      if (at("::")) {
        head.push_back(i_);
        ++i_;
        continue;
      }
      if (at("~") && tok(1).ident()) {
        head.push_back(i_);
        head.push_back(i_ + 1);
        i_ += 2;
        continue;
      }
      if (at("<")) {
        if (head.empty() || !t_[head.back()].ident()) fail("unexpected '<'");
        skip_angles(&head);
        continue;
      }
      if (at("(")) {
        if (at("*", 1) || at("&", 1) || at("^", 1)) {
          if (head.empty()) fail("unexpected '('");
          // Grouped declarator: `R (*name)(Args)`.
          Indices group;
          skip_balanced(&group);
          for (std::size_t k : group) {
            if (t_[k].ident()) grouped_name = k;
          }
          if (!grouped_name) fail("malformed declarator");
          head.insert(head.end(), group.begin(), group.end());
          while (at("(") || at("[")) skip_balanced(&head);
          break;
        }
        if (head.empty()) fail("unexpected '('");
        const Tok& last = t_[head.back()];
        if ((last.ident() && !kBuiltinTypes.contains(last.text)) || last.is(">")) break;
        fail("unexpected '('");
      }
      if (at(";") || at("=") || at("{") || at(",") || at(":") || at("[")) break;
      if (at("}") || at(")") || at("]")) fail("unexpected '" + t.text + "'");
      head.push_back(i_);
      ++i_;
    }

    if (!grouped_name && (op || at("("))) return function_declaration(ctx, start, doc, tparams, head, op, is_static);
    variable_declaration(ctx, start, doc, tparams, head, grouped_name, is_static);
  }

  void function_declaration(Ctx& ctx, std::size_t start, const std::optional<std::string>& doc,
                            const std::vector<std::string>& tparams, Indices& head,
                            const std::optional<std::string>& op, bool is_static) {
    std::string name;
    std::size_t name_pos = head.size();
    if (op) {
      name = *op;
    } else {
      std::size_t k = head.size() - 1;
      if (t_[head[k]].is(">")) {
        int depth = 0;
        while (true) {
          if (t_[head[k]].is(">")) ++depth;
          if (t_[head[k]].is("<")) --depth;
          if (depth == 0 || k == 0) break;
          --k;
        }
        if (k == 0) fail("malformed declarator");
        --k;
      }
      if (!t_[head[k]].ident()) fail("malformed declarator");
      name = t_[head[k]].text;
      name_pos = k;
      if (k > 0 && t_[head[k - 1]].is("~")) {
        name = "~" + name;
        name_pos = k - 1;
      }
    }
    auto [qualifier, qual_begin] = qualifier_before(head, name_pos);
    Indices type(head.begin(), head.begin() + static_cast<std::ptrdiff_t>(qual_begin));
    const std::vector<std::string> scope_tparams = joined(ctx.tparams, tparams);

    Params params = parameters();
    bool is_const = false;
    bool is_pure = false;
    std::string ref;
    while (true) {
      if (at("const")) {
        is_const = true;
        ++i_;
      } else if (at("volatile") || at("override") || at("final")) {
        ++i_;
      } else if (at("&")) {
        ref += "&";
        ++i_;
      } else if (at("noexcept") || at("throw") || at("__attribute__")) {
        ++i_;
        if (at("(")) skip_balanced();
      } else if (at_attribute()) {
        skip_balanced();
      } else if (at("->")) {
        ++i_;
        Indices trailing;
        while (!at("{") && !at(";") && !at("=") && !at("requires") && !at("override") && !at("final")) {
          if (at_end() || at("}")) fail("malformed trailing return type");
          if (at("(") || at("[")) {
            skip_balanced(&trailing);
            continue;
          }
          if (at("<")) {
            skip_angles(&trailing);
            continue;
          }
          trailing.push_back(i_);
          ++i_;
        }
        type = trailing;
      } else if (at("requires")) {
        skip_requires();
      } else if (tok().ident() && is_macro_name(tok().text)) {
        ++i_;
        if (at("(")) skip_balanced();
      } else {
        break;
      }
    }
    bool definition = false;
    std::size_t end = i_;
    if (at("=")) {
      ++i_;
      if (at("0")) is_pure = true;
      if (at("0") || at("default") || at("delete")) ++i_;
      if (at("(")) skip_balanced();
    }
    if (at(";")) {
      end = i_;
      ++i_;
    } else if (at(":") || at("{") || at("try")) {
      const bool has_try = at("try");
      if (has_try) ++i_;
      if (at(":")) {
        ++i_;
        while (!at("{") || (i_ > 0 && (t_[i_ - 1].ident() || t_[i_ - 1].is(">")))) {
          if (at_end() || at(";") || at("}")) fail("malformed constructor initializer");
          if (at("(") || at("{") || at("[")) {
            skip_balanced();
            continue;
          }
          ++i_;
        }
      }
      if (!at("{")) fail("expected function body");
      end = skip_balanced();
      while (has_try && at("catch")) {
        ++i_;
        if (at("(")) skip_balanced();
        if (!at("{")) fail("expected handler body");
        end = skip_balanced();
      }
      definition = true;
      if (at(";")) ++i_;
    } else if (at(",")) {
      skip_to_semicolon();
      end = i_ - 1;
    } else {
      fail("expected ';' or function body");
    }
    (void)definition;

    ParsedMember m;
    m.name = name;
    m.is_function = true;
    m.is_pure = is_pure;
    m.is_static = is_static;
    m.param_count = params.list.size();
    m.type = render(type);
    m.type_refs = refs(type, scope_tparams);
    m.param_refs = refs(params.all, scope_tparams);
    std::string dis = "(";
    for (std::size_t k = 0; k < params.list.size(); ++k) {
      if (k) dis += ',';
      dis += render(params.list[k]);
    }
    dis += ')';
    if (is_const) dis += " const";
    dis += ref;
    m.disambiguator = std::move(dis);
    m.doc = doc ? doc : doc_after(end);
    m.span = span(start, end);

    const bool is_operator = name.starts_with("operator");
    if (!qualifier.empty() && ctx.cls < 0) {
      if (name.starts_with("~")) {
        m.construct = Construct::Destructor;
      } else if (is_operator) {
        m.construct = Construct::Operator;
      } else if (type.empty() && base_name(qualifier.back()) == name) {
        m.construct = Construct::Constructor;
      } else {
        m.construct = Construct::Method;
      }
      out_.out_of_line.push_back({ctx.ns, qualifier, std::move(m)});
      return;
    }
    if (ctx.cls >= 0) {
      if (!qualifier.empty()) return;
      const std::string cls = base_name(ctx.outer.back());
      if (name.starts_with("~")) {
        m.construct = Construct::Destructor;
      } else if (is_operator) {
        m.construct = Construct::Operator;
      } else if (type.empty() && name == cls) {
        m.construct = Construct::Constructor;
      } else if (ctx.signals) {
        m.construct = Construct::Signal;
      } else {
        m.construct = Construct::Method;
      }
      m.access = ctx.access;
      out_.types[static_cast<std::size_t>(ctx.cls)].members.push_back(std::move(m));
      return;
    }
    // At namespace scope a call-like line without a return type is a macro.
    if (type.empty() && !is_operator) return;
    m.construct = is_operator ? Construct::Operator : Construct::FreeFunction;
    out_.free.push_back({ctx.ns, ctx.internal || is_static, std::move(m)});
  }

  void variable_declaration(Ctx& ctx, std::size_t start, const std::optional<std::string>& doc,
                            const std::vector<std::string>& tparams, Indices& head,
                            std::optional<std::size_t> grouped_name, bool is_static) {
    const std::vector<std::string> scope_tparams = joined(ctx.tparams, tparams);
    std::size_t name_index = 0;
    Indices type;
    std::vector<std::string> qualifier;
    if (grouped_name) {
      name_index = *grouped_name;
      for (std::size_t k : head) {
        if (k != name_index) type.push_back(k);
      }
    } else {
      if (head.size() < 2 || !t_[head.back()].ident() || kNonNames.contains(t_[head.back()].text)) {
        // Nothing declared here: a stray statement or an unknown macro.
        return skip_to_semicolon();
      }
      name_index = head.back();
      auto [quals, begin] = qualifier_before(head, head.size() - 1);
      qualifier = quals;
      type.assign(head.begin(), head.begin() + static_cast<std::ptrdiff_t>(begin));
      if (type.empty()) return skip_to_semicolon();
    }
    const std::string type_text = render(type);
    const std::vector<std::string> type_refs = refs(type, scope_tparams);
    // Base type shared by later declarators, without pointer/reference marks.
    std::string name = t_[name_index].text;
    std::optional<std::string> first_doc = doc;
    std::size_t decl_start = start;
    while (true) {
      while (at("[")) skip_balanced();
      if (at(":")) {
        ++i_;
        skip_initializer();
      }
      if (at("=")) {
        ++i_;
        skip_initializer();
      } else if (at("{") || at("(")) {
        skip_balanced();
      }
      const std::size_t last = i_ - 1;
      std::optional<std::string> d = first_doc;
      if (!d && (at(",") || at(";"))) d = doc_after(i_);
      if (!d) d = doc_after(last);
      if (!qualifier.empty()) {
        if (ctx.cls < 0) {
          ParsedMember m;
          m.construct = Construct::Field;
          m.name = name;
          m.type = type_text;
          m.type_refs = type_refs;
          m.doc = d;
          m.span = span(decl_start, last);
          out_.out_of_line.push_back({ctx.ns, qualifier, std::move(m)});
        }
      } else {
        add_data(ctx, name, type_text, type_refs, is_static, d, span(decl_start, last));
      }
      first_doc.reset();
      if (at(",")) {
        ++i_;
        decl_start = i_;
        while (at("*") || at("&") || at("const")) ++i_;
        if (!tok().ident()) return skip_to_semicolon();
        name = tok().text;
        qualifier.clear();
        ++i_;
        continue;
      }
      if (at(";")) {
        ++i_;
        return;
      }
      fail("expected ';'");
    }
  }

  const std::vector<Tok>& t_;
  const std::vector<std::string>& docs_;
  std::size_t i_ = 0;
  ParsedFile out_;
  std::optional<std::string> carried_doc_;
};

}  // namespace

ParsedFile parse(const LexedFile& file) { return Parser(file).run(); }

}  // namespace codecarta::miner
