// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "../src/miner/lexer.hpp"
#include "../src/miner/parser.hpp"
#include "codecarta/error.hpp"
#include "codecarta/miner.hpp"
#include "codecarta/serializer.hpp"
#include "temp_dir.hpp"

using namespace codecarta;
using testsupport::TempDir;

namespace {

std::vector<const Entity*> named(const EntityGraph& g, std::string_view name) {
  std::vector<const Entity*> out;
  for (const auto& [t, e] : g.entities()) {
    if (e.name == name) out.push_back(&e);
  }
  return out;
}

const Entity& only(const EntityGraph& g, std::string_view name) {
  const auto found = named(g, name);
  REQUIRE_MESSAGE(found.size() == 1, "entity " << name << " found " << found.size() << " times");
  return *found.front();
}

std::size_t count_kind(const EntityGraph& g, EntityKind kind) {
  return static_cast<std::size_t>(
      std::count_if(g.entities().begin(), g.entities().end(), [&](const auto& p) { return p.second.kind == kind; }));
}

std::size_t diagnostic_total(const EntityGraph& g) {
  std::size_t n = 0;
  for (const auto& [t, e] : g.entities()) n += e.diagnostics.size();
  return n;
}

MinerConfig config_for(const TempDir& dir) {
  MinerConfig c;
  c.root = dir.path();
  return c;
}

}  // namespace

TEST_CASE("lexer keeps doc comments and drops preprocessor lines") {
  const auto lexed = miner::lex(
      "#include <x>\n"
      "/// Doc.\n"
      "int a; ///< after\n"
      "#if 0\nint hidden;\n#else\nint shown;\n#endif\n");
  std::vector<std::string> idents;
  for (const auto& t : lexed.tokens) {
    if (t.kind == miner::Tok::Kind::Ident) idents.push_back(t.text);
  }
  CHECK(idents == std::vector<std::string>{"int", "a", "int", "shown"});
  REQUIRE(lexed.tokens.front().doc_before >= 0);
  CHECK(lexed.docs[lexed.tokens.front().doc_before].find("Doc.") != std::string::npos);
  REQUIRE(lexed.tokens[2].doc_after >= 0);
  CHECK(lexed.docs[lexed.tokens[2].doc_after].find("after") != std::string::npos);
}

TEST_CASE("lexer rejects unterminated comments and strings") {
  CHECK_THROWS_AS(miner::lex("int a; /* open"), miner::LexError);
  CHECK_THROWS_AS(miner::lex("const char* s = \"open\n"), miner::LexError);
  CHECK_THROWS_AS(miner::lex(std::string("int a;\0", 7)), miner::LexError);
  CHECK_THROWS_AS(miner::lex("auto r = R\"x(never closed"), miner::LexError);
}

TEST_CASE("parser recovers from garbage and reports the position") {
  const auto parsed = miner::parse(miner::lex("struct A { int x; };\n) ) garbage ;\nstruct B { int y; };\n"));
  CHECK(parsed.types.size() == 2);
  REQUIRE_FALSE(parsed.problems.empty());
  CHECK(parsed.problems.front().line == 2);
}

TEST_CASE("parser sees through templates, requires clauses and trailing returns") {
  const auto parsed = miner::parse(miner::lex(
      "namespace n {\n"
      "template <typename T> requires (sizeof(T) > 1)\n"
      "class Box { public: auto get() const -> T; T value_; };\n"
      "}\n"));
  REQUIRE(parsed.types.size() == 1);
  CHECK(parsed.types[0].name == "Box");
  CHECK(parsed.types[0].ns == std::vector<std::string>{"n"});
  CHECK(parsed.types[0].members.size() == 2);
  CHECK(parsed.problems.empty());
}

TEST_CASE("source mapping is total and ordered like the construct enumeration") {
  const auto rows = source_mapping();
  REQUIRE(rows.size() == static_cast<std::size_t>(Construct::Placeholder) + 1);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(static_cast<std::size_t>(rows[k].construct) == k);
    CHECK_FALSE(to_string(rows[k].construct).empty());
    const MappedConstruct m = map_construct({rows[k].construct, "", false, false, false});
    CHECK(m.kind == rows[k].kind);
    CHECK(m.type_kind == rows[k].type_kind);
    CHECK(m.type_kind.has_value() == (m.kind == EntityKind::Type));
    CHECK(m.method_kind.has_value() == (m.kind == EntityKind::Method));
    CHECK(m.accessibility.has_value() == (m.kind == EntityKind::Type || is_member_kind(m.kind)));
  }
}

TEST_CASE("map_construct follows the documented examples") {
  CHECK(map_construct({Construct::FreeFunction, "", false, false, false}).is_static);
  CHECK(map_construct({Construct::FreeFunction, "", false, false, false}).kind == EntityKind::Method);
  CHECK(map_construct({Construct::Enum, "", false, false, false}).type_kind == TypeKind::Enum);
  CHECK_FALSE(map_construct({Construct::Method, "public", false, false, false}).is_static);
  CHECK(map_construct({Construct::Method, "public", true, false, false}).is_static);
  CHECK(map_construct({Construct::Method, "private", false, false, false}).accessibility == Accessibility::Private);
  CHECK(map_construct({Construct::Class, "", false, true, false}).accessibility == Accessibility::Internal);
  CHECK(map_construct({Construct::Class, "", false, false, true}).is_static);
  const auto alias = map_construct({Construct::TypeAlias, "", false, false, false});
  CHECK(alias.kind == EntityKind::Type);
  CHECK(alias.type_kind == TypeKind::Class);
  CHECK(alias.unmapped == "type-alias");
}

TEST_CASE("fixture of construct varieties maps row for row") {
  TempDir dir;
  dir.write("shapes.hpp",
            "namespace shapes {\n"
            "struct Point { double x; double y; static int count; };\n"
            "class Shape { public: virtual ~Shape() = default; virtual double area() const = 0; };\n"
            "class Circle : public Shape {\n"
            " public:\n"
            "  explicit Circle(double r);\n"
            "  double area() const override;\n"
            "  double radius() const;\n"
            "  void set_radius(double r);\n"
            "  bool operator==(const Circle& other) const;\n"
            "  static Circle unit();\n"
            " protected:\n"
            "  double get_scale() const;\n"
            " private:\n"
            "  double r_ = 0;\n"
            "};\n"
            "class Button { signals: void clicked(); };\n"
            "union Bits { int i; float f; };\n"
            "enum class Color { Red, Green };\n"
            "using Callback = void (*)(int);\n"
            "using Size = unsigned long;\n"
            "template <typename T> concept Sized = requires(T t) { t.size(); };\n"
            "int add(int a, int b);\n"
            "bool operator<(const Point& a, const Point& b);\n"
            "namespace { int counter = 0; }\n"
            "}\n");
  const EntityGraph g = mine(config_for(dir));
  REQUIRE(validate_graph(g).valid());

  struct Row {
    std::string name;
    ConstructInfo info;
  };
  const std::vector<Row> rows = {
      {"shapes", {Construct::Namespace, "", false, false, false}},
      {"shapes::Point", {Construct::Struct, "", false, false, false}},
      {"x", {Construct::Field, "public", false, false, false}},
      {"count", {Construct::Field, "public", true, false, false}},
      {"shapes::Shape", {Construct::Interface, "", false, false, false}},
      {"~Shape", {Construct::Destructor, "public", false, false, false}},
      {"shapes::Circle", {Construct::Class, "", false, false, false}},
      {"Circle", {Construct::Constructor, "public", false, false, false}},
      {"radius", {Construct::Property, "public", false, false, false}},
      {"operator==", {Construct::Operator, "public", false, false, false}},
      {"unit", {Construct::Method, "public", true, false, false}},
      {"get_scale", {Construct::Getter, "protected", false, false, false}},
      {"r_", {Construct::Field, "private", false, false, false}},
      {"clicked", {Construct::Signal, "public", false, false, false}},
      {"shapes::Bits", {Construct::Union, "", false, false, false}},
      {"shapes::Color", {Construct::Enum, "", false, false, false}},
      {"Red", {Construct::Enumerator, "public", false, false, false}},
      {"shapes::Callback", {Construct::FunctionAlias, "", false, false, false}},
      {"shapes::Size", {Construct::TypeAlias, "", false, false, false}},
      {"shapes::Sized", {Construct::Concept, "", false, false, false}},
      {"add", {Construct::FreeFunction, "", false, false, false}},
      {"operator<", {Construct::Operator, "", false, false, false}},
      {"counter", {Construct::Variable, "", false, true, false}},
  };
  std::set<Construct> varieties;
  for (const Row& r : rows) {
    CAPTURE(r.name);
    varieties.insert(r.info.construct);
    const SourceMappingRow& row = source_mapping()[static_cast<std::size_t>(r.info.construct)];
    std::vector<const Entity*> found;
    for (const Entity* e : named(g, r.name.starts_with("shapes::") ? r.name.substr(8) : r.name)) {
      if (e->kind == row.kind) found.push_back(e);
    }
    REQUIRE(found.size() == 1);
    const Entity& e = *found.front();
    const MappedConstruct want = map_construct(r.info);
    CHECK(e.kind == row.kind);
    CHECK(e.type_kind == row.type_kind);
    CHECK(e.kind == want.kind);
    CHECK(e.type_kind == want.type_kind);
    CHECK(e.method_kind == want.method_kind);
    CHECK(e.is_static == want.is_static);
    CHECK(e.accessibility == want.accessibility);
    const auto unmapped = e.extra.find("unmappedConstruct");
    CHECK((unmapped != e.extra.end()) == want.unmapped.has_value());
  }
  CHECK(varieties.size() >= 12);
}

TEST_CASE("doc comments") {
  CHECK_FALSE(extract_doc_comment("").has_value());
  CHECK_FALSE(extract_doc_comment("///\n///   \n").has_value());
  const auto one = extract_doc_comment("/// Adds two numbers.");
  REQUIRE(one);
  CHECK(one->paragraphs == std::vector<std::string>{"Adds two numbers."});

  const auto multi = extract_doc_comment(
      "/**\n"
      " * Parses a header line.\n"
      " *\n"
      " * Lines starting with @c # are skipped; see\n"
      " * `split()` for the separator rules.\n"
      " *\n"
      " * @param text raw input\n"
      " * @return the parsed fields\n"
      " */");
  REQUIRE(multi);
  CHECK(multi->paragraphs == std::vector<std::string>{
                                 "Parses a header line.",
                                 "Lines starting with `#` are skipped; see `split()` for the separator rules.",
                                 "`text`: raw input",
                                 "Returns: the parsed fields",
                             });
  CHECK(multi->code_spans() == std::vector<std::string>{"#", "split()", "text"});

  const auto xml = extract_doc_comment("/// <summary>Uses <c>Foo</c>.</summary>\n/// <remarks>Second.</remarks>");
  REQUIRE(xml);
  CHECK(xml->paragraphs == std::vector<std::string>{"Uses `Foo`.", "Second."});
}

TEST_CASE("mined doc comments attach to declarations") {
  TempDir dir;
  dir.write("a.hpp",
            "/// A widget.\n"
            "struct Widget {\n"
            "  int size; ///< in pixels\n"
            "  int bare;\n"
            "};\n");
  const EntityGraph g = mine(config_for(dir));
  REQUIRE(only(g, "Widget").doc);
  CHECK(only(g, "Widget").doc->paragraphs == std::vector<std::string>{"A widget."});
  REQUIRE(only(g, "size").doc);
  CHECK(only(g, "size").doc->paragraphs == std::vector<std::string>{"in pixels"});
  CHECK_FALSE(only(g, "bare").doc);
}

TEST_CASE("bare workspace manifest yields a lone solution") {
  TempDir dir;
  dir.write("workspace.json", "{}");
  const EntityGraph g = mine(config_for(dir));
  CHECK(g.size() == 1);
  CHECK(g.entities().begin()->second.kind == EntityKind::Solution);
  for (const auto& [id, edges] : g.relations()) CHECK(edges.empty());
}

TEST_CASE("two packages with a dependency") {
  TempDir dir;
  dir.write("core/vcpkg.json", R"({"name": "core"})");
  dir.write("core/core.hpp", "namespace core { struct Value { int v; }; }\n");
  dir.write("app/vcpkg.json", R"({"name": "app", "dependencies": ["core"]})");
  dir.write("app/main.cpp", "namespace app { core::Value run(); }\n");
  MinerConfig c = config_for(dir);
  c.follow_external_packages = false;
  const EntityGraph g = mine(c);
  REQUIRE(validate_graph(g).valid());
  CHECK(count_kind(g, EntityKind::Solution) == 1);
  CHECK(count_kind(g, EntityKind::Project) == 2);
  CHECK(count_kind(g, EntityKind::Package) == 0);
  REQUIRE(g.relation(RelationId::DependsOn).size() == 1);
  const Edge dep = *g.relation(RelationId::DependsOn).begin();
  CHECK(g.at(dep.source).name == "app");
  CHECK(g.at(dep.target).name == "core");
  // Cross-project reference resolves to the real type, not a stub.
  REQUIRE(g.relation(RelationId::Returns).size() == 1);
  CHECK(g.at(g.relation(RelationId::Returns).begin()->target).name == "Value");
}

TEST_CASE("external dependencies and unresolved names become packages") {
  TempDir dir;
  dir.write("vcpkg.json", R"({"name": "p", "dependencies": ["fmt", {"name": "zlib"}]})");
  dir.write("p.hpp", "#include <string>\nstruct S { std::string name; };\n");
  const EntityGraph g = mine(config_for(dir));
  REQUIRE(validate_graph(g).valid());
  std::set<std::string> packages;
  for (const auto& [t, e] : g.entities()) {
    if (e.kind == EntityKind::Package) packages.insert(e.name);
  }
  CHECK(packages == std::set<std::string>{"fmt", "std", "zlib"});
  CHECK(g.relation(RelationId::DependsOn).size() == 2);
  CHECK(g.at(g.relation(RelationId::TypeOf).begin()->target).name == "std");

  MinerConfig c = config_for(dir);
  c.follow_external_packages = false;
  CHECK(count_kind(mine(c), EntityKind::Package) == 0);
}

TEST_CASE("dependency cycles are broken with a diagnostic") {
  TempDir dir;
  dir.write("a/vcpkg.json", R"({"name": "a", "dependencies": ["b"]})");
  dir.write("b/vcpkg.json", R"({"name": "b", "dependencies": ["a"]})");
  const EntityGraph g = mine(config_for(dir));
  CHECK(validate_graph(g).valid());
  CHECK(g.relation(RelationId::DependsOn).size() == 1);
  CHECK(diagnostic_total(g) == 1);
}

TEST_CASE("mine reports unusable roots and parameters") {
  TempDir dir;
  MinerConfig c = config_for(dir);
  try {
    mine(c);
    FAIL("expected EmptyWorkspace");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyWorkspace);
  }
  c.root = dir.path() / "missing";
  try {
    mine(c);
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
  dir.write("a.cpp", "int f();\n");
  c.root = dir.path() / "a.cpp";
  try {
    mine(c);
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
  c.root = dir.path();
  c.thread_count = 0;
  try {
    mine(c);
    FAIL("expected Parameter");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parameter);
  }
}

TEST_CASE("broken files become placeholders with an error") {
  TempDir dir;
  dir.write("good.hpp", "struct Good { int g; };\n");
  dir.write("sub/bad.hpp", "struct Bad { /* never closed\n");
  dir.write("odd.hpp", "struct Odd { int a; ) };\nstruct Next {};\n");
  const EntityGraph g = mine(config_for(dir));
  REQUIRE(validate_graph(g).valid());
  const Entity& placeholder = only(g, "sub/bad.hpp");
  CHECK(placeholder.kind == EntityKind::Type);
  CHECK(std::get<bool>(placeholder.extra.at("placeholder")));
  REQUIRE(placeholder.diagnostics.size() == 1);
  CHECK(placeholder.diagnostics[0].severity == Severity::Error);
  CHECK(placeholder.diagnostics[0].code == "lex");
  CHECK(only(g, "Good").kind == EntityKind::Type);
  CHECK(only(g, "Next").kind == EntityKind::Type);
  REQUIRE_FALSE(only(g, "Odd").diagnostics.empty());
  CHECK(only(g, "Odd").diagnostics[0].code == "parse");
}

TEST_CASE("include and exclude globs") {
  TempDir dir;
  dir.write("src/a.cpp", "struct A {};\n");
  dir.write("src/gen/b.cpp", "struct B {};\n");
  dir.write("test/c.cpp", "struct C {};\n");
  MinerConfig c = config_for(dir);
  c.exclude_globs = {"src/gen"};
  EntityGraph g = mine(c);
  CHECK(named(g, "A").size() == 1);
  CHECK(named(g, "B").empty());
  CHECK(named(g, "C").size() == 1);
  c.exclude_globs.clear();
  c.include_globs = {"src/*.cpp"};
  g = mine(c);
  CHECK(named(g, "A").size() == 1);
  CHECK(named(g, "B").empty());
  CHECK(named(g, "C").empty());
  c.include_globs = {"*.cpp"};
  c.exclude_globs = {"gen"};
  g = mine(c);
  CHECK(named(g, "A").size() == 1);
  CHECK(named(g, "B").empty());
  CHECK(named(g, "C").size() == 1);
}

TEST_CASE("member counts and structural validity of the own sources") {
  MinerConfig c;
  c.root = CODECARTA_SOURCE_DIR;
  c.include_globs = {"src/*", "include/*"};
  const EntityGraph g = mine(c);
  const auto report = validate_graph(g);
  CHECK_MESSAGE(report.valid(), report.summary());
  std::size_t types = 0;
  for (const auto& [t, e] : g.entities()) {
    if (e.kind != EntityKind::Type) continue;
    ++types;
    const MemberCounts m = member_counts(g, t);
    CHECK(m.instance == e.instance_member_count);
    CHECK(m.statics == e.static_member_count);
  }
  CHECK(types > 50);
  for (const auto& [t, e] : g.entities()) {
    for (const Diagnostic& d : e.diagnostics) CHECK_MESSAGE(d.code != "parse", e.name << ": " << d.message);
  }
}

TEST_CASE("mining is byte-identical across thread counts and runs") {
  MinerConfig c;
  c.root = CODECARTA_SOURCE_DIR;
  c.include_globs = {"src/*", "include/*", "tests/*"};
  c.thread_count = 1;
  const std::string one = serialize(mine(c));
  c.thread_count = 8;
  CHECK(serialize(mine(c)) == one);
  CHECK(serialize(mine(c)) == one);
}

TEST_CASE("ingest_diagnostics: empty report, method hit and format errors") {
  TempDir dir;
  dir.write("w.hpp",
            "struct W {\n"
            "  void m(int a,\n"
            "         int b);\n"
            "};\n");
  const EntityGraph g = mine(config_for(dir));
  CHECK(ingest_diagnostics(g, "") == g);
  CHECK(ingest_diagnostics(g, "\n  \n") == g);

  const EntityGraph hit = ingest_diagnostics(g, R"({"severity":"error","code":"E1","message":"bad","file":"w.hpp","line":3,"column":10})");
  REQUIRE(only(hit, "m").diagnostics.size() == 1);
  CHECK(only(hit, "m").diagnostics[0].severity == Severity::Error);
  CHECK(only(hit, "W").diagnostics.empty());

  const EntityGraph elsewhere =
      ingest_diagnostics(g, "{\"severity\":\"hint\",\"message\":\"x\",\"file\":\"other.cpp\",\"line\":1}\n"
                            "{\"severity\":\"warning\",\"message\":\"y\"}\n");
  CHECK(diagnostic_total(elsewhere) == 2);

  for (const std::string bad : {"{\"severity\":\"error\"}", "not json", "{\"severity\":\"fatal\",\"message\":\"m\"}",
                                R"({"severity":"error","message":"m","file":"w.hpp","line":-1})"}) {
    CAPTURE(bad);
    try {
      ingest_diagnostics(g, "\n{\"severity\":\"hint\",\"message\":\"ok\"}\n" + bad);
      FAIL("expected Format");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Format);
      CHECK(e.position() == 3u);
    }
  }
}

TEST_CASE("unlocated diagnostics go to the project of their file, else the solution") {
  TempDir dir;
  dir.write("a/vcpkg.json", R"({"name": "a"})");
  dir.write("a/x.hpp", "struct X {};\n");
  dir.write("b/vcpkg.json", R"({"name": "b"})");
  const EntityGraph g = mine(config_for(dir));
  const EntityGraph d = ingest_diagnostics(g,
                                           "{\"severity\":\"hint\",\"message\":\"1\",\"file\":\"a/x.hpp\",\"line\":40}\n"
                                           "{\"severity\":\"hint\",\"message\":\"2\",\"file\":\"b/y.hpp\",\"line\":1}\n"
                                           "{\"severity\":\"hint\",\"message\":\"3\",\"file\":\"c.hpp\",\"line\":1}\n"
                                           "{\"severity\":\"hint\",\"message\":\"4\"}\n");
  CHECK(only(d, "a").diagnostics.size() == 1);
  CHECK(only(d, "b").diagnostics.size() == 1);
  const Entity& solution = d.at(d.roots().front());
  CHECK(solution.kind == EntityKind::Solution);
  CHECK(solution.diagnostics.size() == 2);
}

namespace {

// Deepest containing span by exhaustive search; ties go to the smaller line
// range, then the smaller column range, then the smaller token.
std::optional<Token> brute_force_target(const EntityGraph& g, const SourceLocation& loc) {
  std::optional<Token> best;
  std::tuple<int, long, long> best_key{-1, 0, 0};
  for (const auto& [token, e] : g.entities()) {
    for (const SourceSpan& s : e.spans) {
      if (s.file != loc.file) continue;
      const bool after_begin = loc.line > s.begin_line || (loc.line == s.begin_line && loc.column >= s.begin_column);
      const bool before_end = loc.line < s.end_line || (loc.line == s.end_line && loc.column <= s.end_column);
      if (!after_begin || !before_end) continue;
      int depth = 0;
      for (auto p = g.declaring_parent(token); p; p = g.declaring_parent(*p)) ++depth;
      const std::tuple<int, long, long> key{depth, -static_cast<long>(s.end_line - s.begin_line),
                                            -(static_cast<long>(s.end_column) - static_cast<long>(s.begin_column))};
      if (!best || key > best_key || (key == best_key && token < *best)) {
        best = token;
        best_key = key;
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("diagnostic attachment equals the brute-force deepest span on 100 random locations") {
  TempDir dir;
  dir.write("lib/geo.hpp",
            "namespace geo {\n"
            "struct Vec {\n"
            "  double x, y;\n"
            "  double dot(const Vec& o) const;\n"
            "  struct Inner { int k; void poke(int a,\n"
            "                                  int b); };\n"
            "};\n"
            "enum class Axis { X, Y };\n"
            "double length(const Vec& v);\n"
            "}\n");
  dir.write("lib/geo.cpp",
            "#include \"geo.hpp\"\n"
            "namespace geo {\n"
            "double Vec::dot(const Vec& o) const {\n"
            "  return x * o.x + y * o.y;\n"
            "}\n"
            "double length(const Vec& v) { return v.dot(v); }\n"
            "}\n");
  const EntityGraph g = mine(config_for(dir));
  std::mt19937_64 rng(99);
  std::ostringstream report;
  std::vector<SourceLocation> locations;
  const std::vector<std::string> files = {"lib/geo.hpp", "lib/geo.cpp"};
  for (int k = 0; k < 100; ++k) {
    SourceLocation loc{files[rng() % 2], static_cast<std::uint32_t>(1 + rng() % 11),
                       static_cast<std::uint32_t>(1 + rng() % 45)};
    locations.push_back(loc);
    report << R"({"severity":"warning","message":")" << k << R"(","file":")" << loc.file << R"(","line":)"
           << loc.line << R"(,"column":)" << loc.column << "}\n";
  }
  const EntityGraph d = ingest_diagnostics(g, report.str());
  CHECK(diagnostic_total(d) == 100);
  std::map<std::string, Token> where;
  for (const auto& [t, e] : d.entities()) {
    for (const Diagnostic& diag : e.diagnostics) where.emplace(diag.message, t);
  }
  std::size_t inside = 0;
  for (int k = 0; k < 100; ++k) {
    CAPTURE(k);
    const auto expected = brute_force_target(g, locations[k]);
    if (expected) {
      ++inside;
      CHECK(where.at(std::to_string(k)) == *expected);
    } else {
      CHECK(d.at(where.at(std::to_string(k))).kind == EntityKind::Project);
    }
  }
  CHECK(inside > 50);
}

namespace {

// Entity identity independent of tokens: the chain of (kind, name,
// disambiguator) from the root.
using Path = std::vector<std::tuple<EntityKind, std::string, std::string>>;

Path path_of(const EntityGraph& g, const Token& t) {
  Path p;
  for (std::optional<Token> cur = t; cur; cur = g.declaring_parent(*cur)) {
    const Entity& e = g.at(*cur);
    p.emplace_back(e.kind, e.name, e.disambiguator);
  }
  std::reverse(p.begin(), p.end());
  return p;
}

std::set<Path> sibling_paths(const EntityGraph& g, const Token& t) {
  std::set<Path> out;
  const auto parent = g.declaring_parent(t);
  for (const Token& s : parent ? g.declared_children(*parent) : g.roots()) out.insert(path_of(g, s));
  return out;
}

}  // namespace

TEST_CASE("excluding files only removes entities and keeps unaffected tokens") {
  TempDir dir;
  dir.write("core/vcpkg.json", R"({"name": "core"})");
  dir.write("core/a.hpp", "namespace core { struct A { int a; }; struct Shared { int s; }; }\n");
  dir.write("core/b.hpp", "namespace core { struct B : A { int b; }; }\n");
  dir.write("core/c.hpp", "namespace core { struct Shared { void more(); }; struct C {}; }\n");
  dir.write("ui/vcpkg.json", R"({"name": "ui", "dependencies": ["core"]})");
  dir.write("ui/w.hpp", "namespace ui { struct Window { core::C c; }; }\n");
  MinerConfig c = config_for(dir);
  const EntityGraph full = mine(c);
  std::map<Path, Token> full_tokens;
  for (const auto& [t, e] : full.entities()) full_tokens.emplace(path_of(full, t), t);

  for (const std::string glob : {"core/c.hpp", "core/b.hpp", "ui", "*/a.hpp"}) {
    CAPTURE(glob);
    c.exclude_globs = {glob};
    const EntityGraph part = mine(c);
    REQUIRE(validate_graph(part).valid());
    CHECK(part.size() < full.size());
    for (const auto& [t, e] : part.entities()) {
      // A reference whose target was excluded can only resolve to a stub.
      if (e.kind == EntityKind::Package) continue;
      const Path p = path_of(part, t);
      REQUIRE(full_tokens.contains(p));
      bool unaffected = true;
      for (std::optional<Token> cur = t; cur && unaffected; cur = part.declaring_parent(*cur)) {
        unaffected = sibling_paths(part, *cur) == sibling_paths(full, full_tokens.at(path_of(part, *cur)));
      }
      if (unaffected) CHECK(full_tokens.at(p) == t);
    }
  }
}

TEST_CASE("no diagnostic is dropped") {
  TempDir dir;
  dir.write("x.hpp", "struct X { void f(); int g; };\nnamespace n { int h(); }\n");
  const EntityGraph g = mine(config_for(dir));
  std::mt19937_64 rng(3);
  for (int round = 0; round < 20; ++round) {
    std::ostringstream report;
    const int n = static_cast<int>(rng() % 30);
    for (int k = 0; k < n; ++k) {
      report << R"({"severity":"hint","message":"m","file":")" << (rng() % 3 ? "x.hpp" : "y.hpp")
             << R"(","line":)" << rng() % 4 << R"(,"column":)" << rng() % 30 << "}\n";
    }
    CHECK(diagnostic_total(ingest_diagnostics(g, report.str())) == static_cast<std::size_t>(n));
  }
}

TEST_CASE("workspace diagnostics file is applied during mining") {
  TempDir dir;
  dir.write("workspace.json", R"({"name": "ws", "members": ["p"], "diagnostics": "diag.ndjson"})");
  dir.write("p/vcpkg.json", R"({"name": "p"})");
  dir.write("p/p.hpp", "struct P {\n  int v;\n};\n");
  dir.write("diag.ndjson", R"({"severity":"error","code":"C1","message":"boom","file":"p/p.hpp","line":2,"column":3})");
  const EntityGraph g = mine(config_for(dir));
  CHECK(only(g, "ws").kind == EntityKind::Solution);
  REQUIRE(only(g, "v").diagnostics.size() == 1);
  CHECK(only(g, "v").diagnostics[0].code == "C1");
}
