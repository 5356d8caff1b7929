// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "codecarta/error.hpp"
#include "codecarta/graph_builder.hpp"
#include "codecarta/miner.hpp"
#include "lexer.hpp"
#include "parser.hpp"
#include "workspace.hpp"

namespace codecarta {

namespace {

namespace fs = std::filesystem;
using namespace miner;
using Id = GraphBuilder::Id;

std::string join(const std::vector<std::string>& parts, std::size_t count = std::numeric_limits<std::size_t>::max()) {
  std::string out;
  for (std::size_t k = 0; k < parts.size() && k < count; ++k) {
    if (k) out += "::";
    out += parts[k];
  }
  return out;
}

std::string qualify(const std::string& scope, const std::string& name) { return scope.empty() ? name : scope + "::" + name; }

std::string first_component(std::string_view name) {
  if (name.starts_with("::")) name.remove_prefix(2);
  return std::string(name.substr(0, name.find("::")));
}

// ---------------------------------------------------------------------------
// Parsing

struct FileResult {
  std::string rel;
  std::size_t project = 0;
  std::optional<ParsedFile> parsed;
  std::string fatal;
  std::string fatal_code;
  std::uint32_t fatal_line = 1;
  std::uint32_t fatal_column = 1;
  std::uint32_t last_line = 1;
};

void parse_file(const fs::path& root, FileResult& result) {
  std::ifstream in(root / result.rel, std::ios::binary);
  std::ostringstream text;
  if (in) text << in.rdbuf();
  if (!in && !in.eof()) {
    result.fatal = "cannot read file";
    result.fatal_code = "io";
    return;
  }
  const std::string source = text.str();
  result.last_line = static_cast<std::uint32_t>(std::count(source.begin(), source.end(), '\n') + 1);
  try {
    result.parsed = parse(lex(source));
  } catch (const LexError& e) {
    result.fatal = e.message;
    result.fatal_code = "lex";
    result.fatal_line = e.line;
    result.fatal_column = e.column;
  }
}

void parse_all(const fs::path& root, std::vector<FileResult>& files, std::size_t threads) {
  threads = std::min(threads, files.size());
  if (threads <= 1) {
    for (FileResult& f : files) parse_file(root, f);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < files.size(); k = next++) parse_file(root, files[k]);
    });
  }
  for (std::thread& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Accumulation across files

struct Scope {
  std::size_t project = 0;
  std::size_t file = 0;
  std::vector<std::string> ns;
  std::vector<std::string> outer;
};

struct MemberAcc {
  ParsedMember m;
  std::vector<SourceSpan> spans;
};

using MemberKey = std::tuple<std::string, std::string, bool>;

MemberKey member_key(const ParsedMember& m) { return {m.name, m.disambiguator, m.is_function}; }

struct TypeAcc {
  ParsedType decl;
  Scope scope;
  std::vector<SourceSpan> spans;
  std::vector<MemberAcc> members;
  std::map<MemberKey, std::size_t> index;
};

struct FreeAcc {
  ParsedMember m;
  bool internal = false;
  Scope scope;
  std::vector<SourceSpan> spans;
};

struct NamespaceAcc {
  std::optional<std::string> doc;
  std::vector<SourceSpan> spans;
};

struct ProjectAcc {
  std::map<std::string, TypeAcc> types;
  std::map<std::tuple<std::string, std::string, std::string, bool>, FreeAcc> free;
  std::map<std::string, NamespaceAcc> namespaces;
};

SourceSpan to_span(const std::string& file, const Range& r) {
  return {file, r.begin_line, r.begin_column, r.end_line, r.end_column};
}

void add_span(std::vector<SourceSpan>& spans, SourceSpan s) {
  if (std::find(spans.begin(), spans.end(), s) == spans.end()) spans.push_back(std::move(s));
}

void merge_member(TypeAcc& type, const ParsedMember& m, const std::string& file) {
  const MemberKey key = member_key(m);
  if (const auto it = type.index.find(key); it != type.index.end()) {
    MemberAcc& existing = type.members[it->second];
    add_span(existing.spans, to_span(file, m.span));
    if (!existing.m.doc && m.doc) existing.m.doc = m.doc;
    return;
  }
  type.index.emplace(key, type.members.size());
  type.members.push_back({m, {to_span(file, m.span)}});
}

// ---------------------------------------------------------------------------
// Member shaping: properties, accessors, interfaces

struct MemberOut {
  ConstructInfo info;
  std::string name;
  std::string disambiguator;
  std::string type;
  std::vector<std::string> type_refs;
  std::vector<std::string> param_refs;
  std::optional<std::string> doc;
  std::vector<SourceSpan> spans;
  std::map<std::string, Scalar> extra;
};

std::string lower_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

// "get_x"/"getX" -> "x"; "" when the name has no such prefix.
std::string accessor_stem(const std::string& name, std::string_view prefix) {
  if (name.size() > prefix.size() + 1 && name.starts_with(prefix) && name[prefix.size()] == '_') {
    return name.substr(prefix.size() + 1);
  }
  if (name.size() > prefix.size() && name.starts_with(prefix) &&
      std::isupper(static_cast<unsigned char>(name[prefix.size()]))) {
    return lower_first(name.substr(prefix.size()));
  }
  return {};
}

std::string signature(const ParsedMember& m) { return (m.type.empty() ? "" : m.type + " ") + m.name + m.disambiguator; }

bool interface_like(const std::vector<MemberAcc>& members) {
  bool any = false;
  for (const MemberAcc& a : members) {
    const ParsedMember& m = a.m;
    if (!m.is_function) return false;
    if (m.construct == Construct::Constructor || m.construct == Construct::Destructor) continue;
    if (!m.is_pure) return false;
    any = true;
  }
  return any;
}

std::vector<MemberOut> shape_members(const std::vector<MemberAcc>& members) {
  // Candidate accessors keyed by stem.
  std::map<std::string, std::vector<std::size_t>> getters, setters;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const ParsedMember& m = members[k].m;
    if (m.construct != Construct::Method) continue;
    if (m.param_count == 1) {
      if (auto stem = accessor_stem(m.name, "set"); !stem.empty()) setters[stem].push_back(k);
    }
    if (m.param_count == 0 && !m.type.empty() && m.type != "void") {
      std::string stem = accessor_stem(m.name, "get");
      if (stem.empty()) stem = lower_first(m.name);
      getters[stem].push_back(k);
    }
  }
  std::map<std::size_t, std::size_t> paired;  // getter -> setter
  std::set<std::size_t> consumed;
  for (const auto& [stem, ks] : setters) {
    const auto g = getters.find(stem);
    if (ks.size() != 1 || g == getters.end() || g->second.size() != 1) continue;
    const std::size_t getter = g->second.front();
    if (members[getter].m.is_static != members[ks.front()].m.is_static) continue;
    paired.emplace(getter, ks.front());
    consumed.insert(getter);
    consumed.insert(ks.front());
  }

  std::vector<MemberOut> out;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const ParsedMember& m = members[k].m;
    if (consumed.contains(k) && !paired.contains(k)) continue;
    MemberOut o;
    o.info.construct = m.construct;
    o.info.access = m.access;
    o.info.static_keyword = m.is_static;
    o.name = m.name;
    o.type = m.type;
    o.type_refs = m.type_refs;
    o.param_refs = m.param_refs;
    o.doc = m.doc;
    o.spans = members[k].spans;
    if (const auto p = paired.find(k); p != paired.end()) {
      const ParsedMember& setter = members[p->second].m;
      o.info.construct = Construct::Property;
      const std::string stem = accessor_stem(m.name, "get");
      o.name = stem.empty() ? m.name : stem;
      if (!o.doc) o.doc = setter.doc;
      for (const SourceSpan& s : members[p->second].spans) add_span(o.spans, s);
      o.param_refs.clear();
      o.extra["type"] = m.type;
      o.extra["getter"] = signature(m);
      o.extra["setter"] = signature(setter);
      out.push_back(std::move(o));
      continue;
    }
    if (m.construct == Construct::Method) {
      if (!accessor_stem(m.name, "get").empty()) {
        o.info.construct = Construct::Getter;
      } else if (!accessor_stem(m.name, "set").empty() && m.param_count >= 1) {
        o.info.construct = Construct::Setter;
      }
    }
    if (m.is_function) {
      o.disambiguator = m.disambiguator;
      o.extra["signature"] = signature(m);
    } else if (!m.type.empty()) {
      o.extra["type"] = m.type;
    }
    out.push_back(std::move(o));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graph assembly

struct PendingRef {
  Id source;
  RelationId relation;
  std::string ref;
  Scope scope;
};

class Assembler {
 public:
  Assembler(const MinerConfig& config, const Workspace& ws, std::vector<FileResult>& files)
      : config_(config), ws_(ws), files_(files), accs_(ws.projects.size()) {}

  EntityGraph run() {
    create_structure();
    accumulate();
    for (std::size_t p = 0; p < ws_.projects.size(); ++p) emit_project(p);
    attach_problems();
    resolve_refs();
    return builder_.build();
  }

 private:
  Id add(Entity e, std::optional<Id> parent) {
    const auto key = std::make_tuple(parent.value_or(std::numeric_limits<Id>::max()), static_cast<int>(e.kind), e.name,
                                     e.disambiguator);
    if (const auto it = keys_.find(key); it != keys_.end()) {
      Entity& existing = builder_.entity(it->second);
      for (SourceSpan& s : e.spans) add_span(existing.spans, std::move(s));
      for (Diagnostic& d : e.diagnostics) existing.diagnostics.push_back(std::move(d));
      if (!existing.doc) existing.doc = std::move(e.doc);
      return it->second;
    }
    const Id id = builder_.add(std::move(e), parent);
    keys_.emplace(key, id);
    return id;
  }

  static Diagnostic error(std::string code, std::string message, std::optional<SourceLocation> where) {
    return {Severity::Error, std::move(code), std::move(message), std::move(where)};
  }

  Id package(const std::string& name, bool dependency) {
    if (const auto it = packages_.find(name); it != packages_.end()) {
      if (dependency) builder_.entity(it->second).extra["origin"] = std::string("dependency");
      return it->second;
    }
    Entity e;
    e.kind = EntityKind::Package;
    e.name = name;
    e.extra["origin"] = std::string(dependency ? "dependency" : "reference");
    const Id id = add(std::move(e), solution_);
    packages_.emplace(name, id);
    return id;
  }

  void create_structure() {
    Entity sol;
    sol.kind = EntityKind::Solution;
    sol.name = ws_.name;
    for (const ManifestProblem& p : ws_.problems) {
      sol.diagnostics.push_back(error("manifest", p.message, SourceLocation{p.file, 1, 1}));
    }
    solution_ = add(std::move(sol), std::nullopt);

    std::map<std::string, std::size_t> name_count;
    for (const ProjectInfo& p : ws_.projects) ++name_count[p.name];
    for (std::size_t k = 0; k < ws_.projects.size(); ++k) {
      const ProjectInfo& info = ws_.projects[k];
      Entity e;
      e.kind = EntityKind::Project;
      e.name = info.name;
      if (name_count[info.name] > 1) e.disambiguator = info.dir;
      e.extra["path"] = info.dir;
      if (!info.manifest.empty()) e.extra["manifest"] = info.manifest;
      for (const ManifestProblem& p : info.problems) {
        e.diagnostics.push_back(error("manifest", p.message, SourceLocation{p.file, 1, 1}));
      }
      project_ids_.push_back(add(std::move(e), solution_));
      if (!project_by_name_.contains(info.name)) project_by_name_.emplace(info.name, k);
    }

    // dependsOn, dropping edges that would close a cycle.
    std::vector<std::set<std::size_t>> reach(ws_.projects.size());
    auto reaches = [&](std::size_t from, std::size_t to) {
      std::vector<std::size_t> stack{from};
      std::set<std::size_t> seen;
      while (!stack.empty()) {
        const std::size_t n = stack.back();
        stack.pop_back();
        if (n == to) return true;
        if (!seen.insert(n).second) continue;
        for (std::size_t m : reach[n]) stack.push_back(m);
      }
      return false;
    };
    dependency_projects_.resize(ws_.projects.size());
    for (std::size_t k = 0; k < ws_.projects.size(); ++k) {
      for (const std::string& dep : ws_.projects[k].dependencies) {
        const auto target = project_by_name_.find(dep);
        if (target != project_by_name_.end()) {
          const std::size_t q = target->second;
          if (q == k) continue;
          if (reaches(q, k)) {
            builder_.entity(project_ids_[k])
                .diagnostics.push_back(error("dependency-cycle", "dependency on '" + dep + "' closes a cycle and is ignored",
                                             std::nullopt));
            continue;
          }
          reach[k].insert(q);
          dependency_projects_[k].push_back(q);
          builder_.relate(RelationId::DependsOn, project_ids_[k], project_ids_[q]);
        } else if (config_.follow_external_packages) {
          builder_.relate(RelationId::DependsOn, project_ids_[k], package(dep, true));
        }
      }
    }
  }

  void accumulate() {
    for (std::size_t f = 0; f < files_.size(); ++f) {
      FileResult& file = files_[f];
      if (!file.parsed) continue;
      ProjectAcc& acc = accs_[file.project];
      const ParsedFile& pf = *file.parsed;
      for (const ParsedNamespace& n : pf.namespaces) {
        NamespaceAcc& na = acc.namespaces[join(n.path)];
        if (!na.doc && n.doc) na.doc = n.doc;
        add_span(na.spans, to_span(file.rel, n.span));
      }
      for (const ParsedType& t : pf.types) {
        std::vector<std::string> path = t.ns;
        path.insert(path.end(), t.outer.begin(), t.outer.end());
        path.push_back(t.name);
        const std::string key = join(path);
        auto [it, fresh] = acc.types.try_emplace(key);
        TypeAcc& ta = it->second;
        if (fresh) {
          ta.decl = t;
          ta.decl.members.clear();
          ta.scope = {file.project, f, t.ns, t.outer};
        } else {
          if (!ta.decl.doc && t.doc) ta.decl.doc = t.doc;
          for (const std::string& b : t.bases) {
            if (std::find(ta.decl.bases.begin(), ta.decl.bases.end(), b) == ta.decl.bases.end()) ta.decl.bases.push_back(b);
          }
        }
        add_span(ta.spans, to_span(file.rel, t.span));
        for (const ParsedMember& m : t.members) merge_member(ta, m, file.rel);
      }
      for (const ParsedFree& fr : pf.free) add_free(acc, fr.ns, fr.internal, fr.member, file.rel, Scope{file.project, f, fr.ns, {}});
    }
    // Out-of-line definitions need every declaration in place first.
    for (std::size_t f = 0; f < files_.size(); ++f) {
      const FileResult& file = files_[f];
      if (!file.parsed) continue;
      for (const ParsedOutOfLine& o : file.parsed->out_of_line) attach_out_of_line(file, f, o);
    }
  }

  void add_free(ProjectAcc& acc, const std::vector<std::string>& ns, bool internal, const ParsedMember& m,
                const std::string& file, const Scope& scope) {
    auto [it, fresh] = acc.free.try_emplace({join(ns), m.name, m.disambiguator, m.is_function});
    FreeAcc& fa = it->second;
    if (fresh) {
      fa.m = m;
      fa.internal = internal;
      fa.scope = scope;
    } else if (!fa.m.doc && m.doc) {
      fa.m.doc = m.doc;
    }
    add_span(fa.spans, to_span(file, m.span));
  }

  void attach_out_of_line(const FileResult& file, std::size_t f, const ParsedOutOfLine& o) {
    const std::string qual = join(o.qualifier);
    auto try_project = [&](ProjectAcc& acc, bool relative) {
      for (std::size_t k = relative ? o.ns.size() + 1 : 1; k-- > 0;) {
        const std::string key = qualify(join(o.ns, k), qual);
        if (const auto it = acc.types.find(key); it != acc.types.end()) {
          TypeAcc& ta = it->second;
          if (const auto m = ta.index.find(member_key(o.member)); m != ta.index.end()) {
            MemberAcc& ma = ta.members[m->second];
            add_span(ma.spans, to_span(file.rel, o.member.span));
            if (!ma.m.doc && o.member.doc) ma.m.doc = o.member.doc;
          } else {
            add_span(ta.spans, to_span(file.rel, o.member.span));
          }
          return true;
        }
        if (o.member.is_function && acc.namespaces.contains(key)) {
          std::vector<std::string> ns;
          for (std::size_t a = 0, b = 0; b <= key.size(); ++b) {
            if (b == key.size() || key.compare(b, 2, "::") == 0) {
              ns.push_back(key.substr(a, b - a));
              a = b + 2;
              ++b;
            }
          }
          ParsedMember m = o.member;
          m.construct = m.name.starts_with("operator") ? Construct::Operator : Construct::FreeFunction;
          add_free(acc, ns, false, m, file.rel, Scope{file.project, f, ns, {}});
          return true;
        }
      }
      return false;
    };
    if (try_project(accs_[file.project], true)) return;
    for (std::size_t p = 0; p < accs_.size(); ++p) {
      if (p != file.project && try_project(accs_[p], false)) return;
    }
  }

  Id namespace_id(std::size_t project, const std::vector<std::string>& ns) {
    if (ns.empty()) return project_ids_[project];
    const std::string key = join(ns);
    const auto id_key = std::make_pair(project, key);
    if (const auto it = namespace_ids_.find(id_key); it != namespace_ids_.end()) return it->second;
    Entity e;
    e.kind = EntityKind::Namespace;
    e.name = key;
    if (const auto it = accs_[project].namespaces.find(key); it != accs_[project].namespaces.end()) {
      if (it->second.doc) e.doc = extract_doc_comment(*it->second.doc);
      e.spans = it->second.spans;
    }
    const Id id = add(std::move(e), project_ids_[project]);
    namespace_ids_.emplace(id_key, id);
    return id;
  }

  Entity mapped_entity(const ConstructInfo& info, std::string name) {
    const MappedConstruct mc = map_construct(info);
    Entity e;
    e.kind = mc.kind;
    e.name = std::move(name);
    e.type_kind = mc.type_kind;
    e.method_kind = mc.method_kind;
    e.is_static = mc.is_static;
    e.accessibility = mc.accessibility;
    if (mc.unmapped) e.extra["unmappedConstruct"] = *mc.unmapped;
    return e;
  }

  void refs_from(Id source, RelationId relation, const std::vector<std::string>& refs, const Scope& scope) {
    for (const std::string& r : refs) pending_.push_back({source, relation, r, scope});
  }

  void emit_member(Id parent, const MemberOut& o, const Scope& scope) {
    Entity e = mapped_entity(o.info, o.name);
    e.disambiguator = o.disambiguator;
    if (o.doc) e.doc = extract_doc_comment(*o.doc);
    e.spans = o.spans;
    e.extra.insert(o.extra.begin(), o.extra.end());
    const Construct c = o.info.construct;
    const Id id = add(std::move(e), parent);
    if (c == Construct::Enumerator) return;
    if (c == Construct::Field || c == Construct::Variable || c == Construct::Property) {
      refs_from(id, RelationId::TypeOf, o.type_refs, scope);
      return;
    }
    if (c != Construct::Constructor && c != Construct::Destructor && c != Construct::Signal) {
      refs_from(id, RelationId::Returns, o.type_refs, scope);
    }
    refs_from(id, RelationId::TypeOf, o.param_refs, scope);
  }

  void emit_project(std::size_t p) {
    ProjectAcc& acc = accs_[p];
    for (auto& [key, ta] : acc.types) {
      ParsedType& t = ta.decl;
      std::vector<MemberOut> members = shape_members(ta.members);
      ConstructInfo info;
      info.construct = t.construct;
      if ((t.construct == Construct::Class || t.construct == Construct::Struct) && interface_like(ta.members)) {
        info.construct = Construct::Interface;
      }
      info.access = t.access;
      info.internal_linkage = t.internal;
      info.all_members_static =
          !members.empty() && std::all_of(members.begin(), members.end(), [](const MemberOut& m) {
            return map_construct(m.info).is_static;
          });
      std::vector<std::string> name_path = t.outer;
      name_path.push_back(t.name);
      Entity e = mapped_entity(info, join(name_path));
      if (t.doc) e.doc = extract_doc_comment(*t.doc);
      e.spans = ta.spans;
      if (!t.aliased.empty()) e.extra["aliasOf"] = t.aliased;
      const Id id = add(std::move(e), namespace_id(p, t.ns));
      type_ids_[{p, key}] = id;
      type_index_[key].push_back({p, id});
      Scope inner = ta.scope;
      inner.outer = name_path;
      refs_from(id, RelationId::InheritsFrom, t.bases, ta.scope);
      refs_from(id, RelationId::TypeOf, t.alias_refs, ta.scope);
      for (const MemberOut& m : members) emit_member(id, m, inner);
    }
    for (auto& [key, fa] : acc.free) {
      MemberOut o;
      o.info.construct = fa.m.construct;
      o.info.internal_linkage = fa.internal;
      o.name = fa.m.name;
      o.type = fa.m.type;
      o.type_refs = fa.m.type_refs;
      o.param_refs = fa.m.param_refs;
      o.doc = fa.m.doc;
      o.spans = fa.spans;
      if (fa.m.is_function) {
        o.disambiguator = fa.m.disambiguator;
        o.extra["signature"] = signature(fa.m);
      } else if (!fa.m.type.empty()) {
        o.extra["type"] = fa.m.type;
      }
      emit_member(namespace_id(p, fa.scope.ns), o, fa.scope);
    }
    // Files that could not be tokenised become placeholders.
    const std::string& dir = ws_.projects[p].dir;
    for (const FileResult& f : files_) {
      if (f.project != p || f.parsed) continue;
      ConstructInfo info;
      info.construct = Construct::Placeholder;
      Entity e = mapped_entity(info, dir.empty() ? f.rel : f.rel.substr(dir.size() + 1));
      e.extra["placeholder"] = true;
      e.spans.push_back({f.rel, 1, 1, f.last_line, std::numeric_limits<std::uint32_t>::max()});
      e.diagnostics.push_back(error(f.fatal_code, f.fatal, SourceLocation{f.rel, f.fatal_line, f.fatal_column}));
      add(std::move(e), project_ids_[p]);
    }
  }

  void attach_problems() {
    for (const FileResult& f : files_) {
      if (!f.parsed) continue;
      for (const ParseProblem& pr : f.parsed->problems) {
        std::vector<std::string> path = pr.ns;
        path.insert(path.end(), pr.outer.begin(), pr.outer.end());
        Id target = project_ids_[f.project];
        if (const auto t = type_ids_.find({f.project, join(path)}); !pr.outer.empty() && t != type_ids_.end()) {
          target = t->second;
        } else if (const auto n = namespace_ids_.find({f.project, join(pr.ns)}); !pr.ns.empty() && n != namespace_ids_.end()) {
          target = n->second;
        }
        builder_.entity(target).diagnostics.push_back(
            error("parse", pr.message, SourceLocation{f.rel, pr.line, pr.column}));
      }
    }
  }

  bool workspace_namespace(const std::string& name) const {
    for (const ProjectAcc& acc : accs_) {
      if (acc.namespaces.contains(name)) return true;
    }
    return false;
  }

  std::optional<Id> lookup(const std::string& key, std::size_t project) const {
    const auto it = type_index_.find(key);
    if (it == type_index_.end()) return std::nullopt;
    const auto& hits = it->second;
    for (const auto& [p, id] : hits) {
      if (p == project) return id;
    }
    for (std::size_t dep : dependency_projects_[project]) {
      for (const auto& [p, id] : hits) {
        if (p == dep) return id;
      }
    }
    return std::min_element(hits.begin(), hits.end())->second;
  }

  std::optional<Id> resolve(const std::string& ref, const Scope& scope) const {
    const ParsedFile& pf = *files_[scope.file].parsed;
    std::vector<std::string> candidates;
    auto scoped = [&](const std::string& name) {
      std::vector<std::string> path = scope.ns;
      path.insert(path.end(), scope.outer.begin(), scope.outer.end());
      for (std::size_t k = path.size(); k > scope.ns.size(); --k) candidates.push_back(qualify(join(path, k), name));
      for (std::size_t k = scope.ns.size() + 1; k-- > 0;) candidates.push_back(qualify(join(scope.ns, k), name));
    };
    if (ref.starts_with("::")) {
      candidates.push_back(ref.substr(2));
    } else {
      scoped(ref);
      const std::string first = first_component(ref);
      const std::string rest = ref.substr(first.size());
      for (const auto& [alias, target] : pf.aliases) {
        if (alias != first) continue;
        const std::string replaced = (target.starts_with("::") ? target.substr(2) : target) + rest;
        if (target.starts_with("::")) {
          candidates.push_back(replaced);
        } else {
          scoped(replaced);
        }
      }
      for (const auto& [ns, target] : pf.using_namespaces) {
        const std::string u = target.starts_with("::") ? target.substr(2) : target;
        for (std::size_t k = target.starts_with("::") ? 1 : ns.size() + 1; k-- > 0;) {
          candidates.push_back(qualify(qualify(join(ns, k), u), ref));
        }
      }
    }
    for (const std::string& c : candidates) {
      if (auto id = lookup(c, scope.project)) return id;
    }
    // `Outer::member_alias` refers into Outer, which is the closest entity.
    const auto cut = ref.rfind("::");
    if (cut != std::string::npos && cut > 0) return resolve(ref.substr(0, cut), scope);
    return std::nullopt;
  }

  std::string stub_name(const std::string& ref, const Scope& scope) const {
    const ParsedFile& pf = *files_[scope.file].parsed;
    std::string first = first_component(ref);
    for (const auto& [alias, target] : pf.aliases) {
      if (alias == first) return first_component(target);
    }
    if (ref.find("::", ref.starts_with("::") ? 2 : 0) != std::string::npos) return first;
    for (const auto& [ns, target] : pf.using_namespaces) {
      const std::string u = target.starts_with("::") ? target.substr(2) : target;
      if (!workspace_namespace(u)) return first_component(u);
    }
    return first;
  }

  void resolve_refs() {
    for (const PendingRef& r : pending_) {
      if (const auto target = resolve(r.ref, r.scope)) {
        builder_.relate(r.relation, r.source, *target);
      } else if (config_.follow_external_packages) {
        builder_.relate(r.relation, r.source, package(stub_name(r.ref, r.scope), false));
      }
    }
  }

  const MinerConfig& config_;
  const Workspace& ws_;
  std::vector<FileResult>& files_;
  std::vector<ProjectAcc> accs_;
  GraphBuilder builder_;
  std::map<std::tuple<Id, int, std::string, std::string>, Id> keys_;
  Id solution_ = 0;
  std::vector<Id> project_ids_;
  std::map<std::string, std::size_t> project_by_name_;
  std::vector<std::vector<std::size_t>> dependency_projects_;
  std::map<std::string, Id> packages_;
  std::map<std::pair<std::size_t, std::string>, Id> namespace_ids_;
  std::map<std::pair<std::size_t, std::string>, Id> type_ids_;
  std::map<std::string, std::vector<std::pair<std::size_t, Id>>> type_index_;
  std::vector<PendingRef> pending_;
};

std::optional<std::size_t> owning_project(const Workspace& ws, const std::string& rel) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < ws.projects.size(); ++k) {
    const std::string& dir = ws.projects[k].dir;
    if (!dir.empty() && !rel.starts_with(dir + "/")) continue;
    if (!best || dir.size() > ws.projects[*best].dir.size()) best = k;
  }
  return best;
}

}  // namespace

EntityGraph mine(const MinerConfig& config) {
  if (config.thread_count == 0) throw Error(ErrorCode::Parameter, "thread count must be at least 1");
  const Workspace ws = discover(config);

  std::vector<FileResult> files;
  for (const std::string& rel : ws.sources) {
    if (const auto p = owning_project(ws, rel)) {
      FileResult f;
      f.rel = rel;
      f.project = *p;
      files.push_back(std::move(f));
    }
  }
  parse_all(config.root, files, config.thread_count);

  EntityGraph graph = Assembler(config, ws, files).run();
  if (config.diagnostics_file) {
    graph = ingest_diagnostics_file(graph, *config.diagnostics_file);
  } else if (ws.diagnostics) {
    graph = ingest_diagnostics_file(graph, *ws.diagnostics);
  }
  return graph;
}

}  // namespace codecarta
