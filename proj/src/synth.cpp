// SPDX-License-Identifier: Apache-2.0
#include "codecarta/synth.hpp"

#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <vector>

#include "codecarta/error.hpp"

namespace codecarta {

namespace {

namespace fs = std::filesystem;

enum class Shape { Struct, Class, Enum, Interface, Delegate };

enum class MemberKind { Field, StaticField, Method, StaticMethod, Property, Event, Pure, Enumerator };

struct MemberGen {
  MemberKind kind;
  std::string name;
  std::string ret_ref;    // return type or field type, qualified; empty for a builtin
  std::string param_ref;  // single parameter type, qualified; empty for none or a builtin
  bool out_of_line = false;
  bool doc = false;
};

struct TypeGen {
  Shape shape;
  std::string name;
  std::string base;  // qualified, empty when none
  bool doc = false;
  std::vector<MemberGen> members;
};

struct ProjectGen {
  std::string name;
  std::vector<std::size_t> deps;
  std::vector<std::string> externals;
  std::vector<TypeGen> types;
  std::vector<MemberGen> frees;
};

constexpr std::string_view kWords[] = {"Widget", "Buffer", "Node",  "Channel", "Record", "Index", "Cursor",
                                       "Frame",  "Token",  "Range", "Matrix",  "Query",  "Store", "Event"};

class Generator {
 public:
  explicit Generator(const SynthConfig& c) : config_(c), rng_(c.seed) {}

  SynthFixture run() {
    SynthLedger& l = fixture_.ledger;
    for (EntityKind k : kAllEntityKinds) l.entities[k] = 0;
    for (TypeKind k : kAllTypeKinds) l.type_kinds[k] = 0;
    for (Severity s : kAllSeverities) l.diagnostics[s] = 0;
    for (RelationId r : kAllRelations) l.relations[r] = 0;

    const std::size_t n_projects = config_.projects;
    projects_.resize(n_projects);
    for (std::size_t p = 0; p < n_projects; ++p) {
      projects_[p].name = "p" + std::to_string(p);
      for (std::size_t q = 0; q < p; ++q) {
        if (chance(0.3)) projects_[p].deps.push_back(q);
      }
    }

    std::size_t budget = config_.target_nodes - 1 - n_projects;
    std::size_t externals = budget >= 40 ? 1 + pick(3) : 0;
    budget -= externals;
    std::size_t active = std::min(n_projects, budget / 2);
    if (active == 0 && budget == 1) {
      externals = 1;
      budget = 0;
    }
    for (std::size_t e = 0; e < externals; ++e) {
      const std::string name = "ext" + std::to_string(e);
      bool used = false;
      for (ProjectGen& p : projects_) {
        if (chance(0.3)) {
          p.externals.push_back(name);
          used = true;
        }
      }
      if (!used) projects_[pick(n_projects)].externals.push_back(name);
    }
    budget -= 2 * active;
    for (std::size_t p = 0; p < active; ++p) new_type(p, false);

    while (budget > 0) {
      const std::size_t p = pick(active);
      const std::size_t roll = pick(100);
      if (roll < 12) {
        const bool interface = budget >= 2 && roll < 2;
        new_type(p, interface);
        budget -= interface ? 2 : 1;
      } else if (roll < 16) {
        projects_[p].frees.push_back(free_function(p));
        --budget;
      } else {
        std::vector<std::size_t> open;
        for (std::size_t t = 0; t < projects_[p].types.size(); ++t) {
          if (projects_[p].types[t].shape != Shape::Delegate) open.push_back(t);
        }
        if (open.empty()) {
          new_type(p, false);
        } else {
          add_member(p, open[pick(open.size())]);
        }
        --budget;
      }
    }

    l.entities[EntityKind::Solution] = 1;
    l.entities[EntityKind::Project] = n_projects;
    l.entities[EntityKind::Package] = externals;
    l.entities[EntityKind::Namespace] = active;
    emit();
    std::size_t nodes = 0;
    for (const auto& [k, n] : l.entities) nodes += n;
    l.nodes = nodes;
    l.relations[RelationId::Declares] = nodes - 1;
    return std::move(fixture_);
  }

 private:
  bool chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  std::string next_name(std::string_view stem) { return std::string(stem) + std::to_string(serial_++); }

  // A qualified reference to an existing type visible from project p, or
  // empty (a builtin) with the given odds.
  std::string maybe_ref(std::size_t p, double odds) {
    if (!chance(odds)) return {};
    std::vector<std::size_t> pool = projects_[p].deps;
    pool.push_back(p);
    const std::size_t q = pool[pick(pool.size())];
    if (projects_[q].types.empty()) return {};
    return projects_[q].name + "::" + projects_[q].types[pick(projects_[q].types.size())].name;
  }

  void new_type(std::size_t p, bool interface) {
    TypeGen t;
    if (interface) {
      t.shape = Shape::Interface;
    } else {
      const std::size_t roll = pick(20);
      t.shape = roll < 8 ? Shape::Struct : roll < 15 ? Shape::Class : roll < 18 ? Shape::Enum : Shape::Delegate;
    }
    t.name = (t.shape == Shape::Interface ? "I" : "") + next_name(kWords[pick(std::size(kWords))]);
    t.doc = chance(0.5);
    if (t.shape == Shape::Class && chance(0.3)) {
      std::vector<std::string> bases;
      for (const TypeGen& other : projects_[p].types) {
        if (other.shape == Shape::Struct || other.shape == Shape::Class) bases.push_back(other.name);
      }
      if (!bases.empty()) t.base = projects_[p].name + "::" + bases[pick(bases.size())];
    }
    projects_[p].types.push_back(std::move(t));
    if (interface) add_member(p, projects_[p].types.size() - 1);
  }

  void add_member(std::size_t p, std::size_t t) {
    const Shape shape = projects_[p].types[t].shape;
    MemberGen m;
    m.doc = chance(0.3);
    const std::size_t roll = pick(100);
    switch (shape) {
      case Shape::Enum:
        m.kind = MemberKind::Enumerator;
        break;
      case Shape::Interface:
        m.kind = MemberKind::Pure;
        break;
      case Shape::Struct:
        m.kind = roll < 45 ? MemberKind::Field : roll < 55 ? MemberKind::StaticField : roll < 90 ? MemberKind::Method
                                                                                                  : MemberKind::StaticMethod;
        break;
      default:
        m.kind = roll < 35   ? MemberKind::Field
                 : roll < 75 ? MemberKind::Method
                 : roll < 85 ? MemberKind::Property
                 : roll < 92 ? MemberKind::Event
                             : MemberKind::StaticMethod;
        break;
    }
    switch (m.kind) {
      case MemberKind::Enumerator: m.name = next_name("Value"); break;
      case MemberKind::Field:
      case MemberKind::StaticField:
        m.name = next_name("slot");
        m.ret_ref = maybe_ref(p, 0.3);
        break;
      case MemberKind::Property: m.name = next_name("level"); break;
      case MemberKind::Event:
        m.name = next_name("changed");
        m.param_ref = maybe_ref(p, 0.4);
        break;
      default:
        m.name = next_name(m.kind == MemberKind::StaticMethod ? "make" : "run");
        m.ret_ref = maybe_ref(p, 0.3);
        m.param_ref = maybe_ref(p, 0.3);
        m.out_of_line = (m.kind == MemberKind::Method || m.kind == MemberKind::StaticMethod) && chance(0.3);
        break;
    }
    projects_[p].types[t].members.push_back(std::move(m));
  }

  MemberGen free_function(std::size_t p) {
    MemberGen m;
    m.kind = MemberKind::StaticMethod;
    m.name = next_name("helper");
    m.ret_ref = maybe_ref(p, 0.3);
    m.param_ref = maybe_ref(p, 0.3);
    m.doc = chance(0.3);
    return m;
  }

  // Records an external diagnostic for the declaration at (file, line).
  void maybe_diagnose(const std::string& file, std::size_t line, std::size_t column, const std::string& what) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    Severity s;
    if (u < config_.error_rate) {
      s = Severity::Error;
    } else if (u < config_.error_rate + config_.warning_rate) {
      s = Severity::Warning;
    } else {
      return;
    }
    ++fixture_.ledger.diagnostics[s];
    nlohmann::ordered_json j;
    j["severity"] = std::string(to_string(s));
    j["code"] = s == Severity::Error ? "SYN1" : "SYN2";
    j["message"] = "synthetic finding on " + what;
    j["file"] = file;
    j["line"] = line;
    j["column"] = column;
    diagnostics_ << j.dump() << '\n';
  }

  static std::string ptr(const std::string& ref) { return ref.empty() ? "int" : "const " + ref + "*"; }
  static std::string param(const std::string& ref) { return ref.empty() ? "" : "const " + ref + "& arg"; }
  static std::string param_type(const std::string& ref) { return ref.empty() ? "" : "const " + ref + "&"; }

  void count_refs(const MemberGen& m) {
    SynthLedger& l = fixture_.ledger;
    const bool returns = m.kind == MemberKind::Method || m.kind == MemberKind::StaticMethod || m.kind == MemberKind::Pure;
    if (!m.ret_ref.empty()) ++l.relations[returns ? RelationId::Returns : RelationId::TypeOf];
    if (!m.param_ref.empty()) ++l.relations[RelationId::TypeOf];
  }

  struct Lines {
    std::vector<std::string> text;
    std::size_t add(std::string line) {
      text.push_back(std::move(line));
      return text.size();
    }
    std::string str() const {
      std::string out;
      for (const std::string& l : text) out += l + "\n";
      return out;
    }
  };

  void emit_type(const ProjectGen& p, const TypeGen& t, Lines& out_of_line) {
    SynthLedger& l = fixture_.ledger;
    const std::string file = p.name + "/include/" + p.name + "/" + t.name + ".hpp";
    Lines h;
    h.add("// Generated fixture.");
    h.add("#pragma once");
    h.add("");
    h.add("namespace " + p.name + " {");
    h.add("");
    if (t.doc) h.add("/// " + t.name + " of the synthetic fixture.");
    ++l.entities[EntityKind::Type];
    if (t.shape == Shape::Delegate) {
      ++l.type_kinds[TypeKind::Delegate];
      maybe_diagnose(file, h.add("using " + t.name + " = void (*)(int);"), 1, t.name);
    } else if (t.shape == Shape::Enum) {
      ++l.type_kinds[TypeKind::Enum];
      maybe_diagnose(file, h.add("enum class " + t.name + " {"), 1, t.name);
      for (const MemberGen& m : t.members) {
        ++l.entities[EntityKind::Field];
        if (m.doc) h.add("  /// Enumerator " + m.name + ".");
        maybe_diagnose(file, h.add("  " + m.name + ","), 3, m.name);
      }
      h.add("};");
    } else {
      const bool is_struct = t.shape == Shape::Struct;
      ++l.type_kinds[t.shape == Shape::Interface ? TypeKind::Interface : is_struct ? TypeKind::Struct : TypeKind::Class];
      std::string head = std::string(is_struct ? "struct " : "class ") + t.name;
      if (!t.base.empty()) {
        head += " : public " + t.base;
        ++l.relations[RelationId::InheritsFrom];
      }
      maybe_diagnose(file, h.add(head + " {"), 1, t.name);
      // Classes list methods and properties first, then signals, then private data.
      const std::vector<std::pair<std::string, std::vector<MemberKind>>> sections =
          is_struct ? std::vector<std::pair<std::string, std::vector<MemberKind>>>{{"", {}}}
                    : std::vector<std::pair<std::string, std::vector<MemberKind>>>{
                          {" public:", {MemberKind::Method, MemberKind::StaticMethod, MemberKind::Property, MemberKind::Pure}},
                          {" signals:", {MemberKind::Event}},
                          {" private:", {MemberKind::Field, MemberKind::StaticField}}};
      for (const auto& [label, kinds] : sections) {
        bool opened = false;
        for (const MemberGen& m : t.members) {
          if (!is_struct && std::find(kinds.begin(), kinds.end(), m.kind) == kinds.end()) continue;
          if (!opened && !label.empty()) h.add(label);
          opened = true;
          emit_member(p, t, m, file, h, out_of_line);
        }
      }
      h.add("};");
    }
    h.add("");
    h.add("}  // namespace " + p.name);
    fixture_.files[file] = h.str();
  }

  void emit_member(const ProjectGen& p, const TypeGen& t, const MemberGen& m, const std::string& file, Lines& h,
                   Lines& out_of_line) {
    SynthLedger& l = fixture_.ledger;
    count_refs(m);
    if (m.doc) h.add("  /// Member " + m.name + ".");
    std::string decl;
    switch (m.kind) {
      case MemberKind::Field:
        ++l.entities[EntityKind::Field];
        decl = ptr(m.ret_ref) + " " + m.name + ";";
        break;
      case MemberKind::StaticField:
        ++l.entities[EntityKind::Field];
        decl = "static " + ptr(m.ret_ref) + " " + m.name + ";";
        break;
      case MemberKind::Property:
        ++l.entities[EntityKind::Property];
        maybe_diagnose(file, h.add("  int " + m.name + "() const;"), 3, m.name);
        decl = "void set_" + m.name + "(int value);";
        break;
      case MemberKind::Event:
        ++l.entities[EntityKind::Event];
        decl = "void " + m.name + "(" + param(m.param_ref) + ");";
        break;
      case MemberKind::Pure:
        ++l.entities[EntityKind::Method];
        decl = "virtual " + ptr(m.ret_ref) + " " + m.name + "(" + param(m.param_ref) + ") const = 0;";
        break;
      default: {
        ++l.entities[EntityKind::Method];
        const bool is_static = m.kind == MemberKind::StaticMethod;
        const std::string tail = m.name + "(" + param(m.param_ref) + ")" + (is_static ? "" : " const");
        decl = (is_static ? "static " : "") + ptr(m.ret_ref) + " " + tail + ";";
        if (m.out_of_line) {
          out_of_line.add(ptr(m.ret_ref) + " " + p.name + "::" + t.name + "::" + tail + " {");
          out_of_line.add("  return {};");
          out_of_line.add("}");
          out_of_line.add("");
        }
        break;
      }
    }
    maybe_diagnose(file, h.add("  " + decl), 3, m.name);
  }

  void emit() {
    SynthLedger& l = fixture_.ledger;
    nlohmann::ordered_json ws;
    ws["name"] = "synth";
    ws["members"] = {"p*"};
    ws["diagnostics"] = "diagnostics.ndjson";
    fixture_.files["workspace.json"] = ws.dump(2) + "\n";
    for (std::size_t k = 0; k < projects_.size(); ++k) {
      const ProjectGen& p = projects_[k];
      nlohmann::ordered_json manifest;
      manifest["name"] = p.name;
      manifest["version"] = "0.1.0";
      nlohmann::json deps = nlohmann::json::array();
      for (std::size_t d : p.deps) deps.push_back(projects_[d].name);
      for (const std::string& e : p.externals) deps.push_back(e);
      manifest["dependencies"] = deps;
      l.relations[RelationId::DependsOn] += deps.size();
      fixture_.files[p.name + "/vcpkg.json"] = manifest.dump(2) + "\n";

      Lines out_of_line;
      for (const TypeGen& t : p.types) emit_type(p, t, out_of_line);
      if (p.types.empty()) continue;

      const std::string file = p.name + "/src/" + p.name + ".cpp";
      Lines s;
      s.add("// Generated fixture.");
      for (const TypeGen& t : p.types) s.add("#include \"" + p.name + "/" + t.name + ".hpp\"");
      s.add("");
      s.add("namespace " + p.name + " {");
      s.add("");
      for (const MemberGen& f : p.frees) {
        ++l.entities[EntityKind::Method];
        count_refs(f);
        if (f.doc) s.add("/// Helper " + f.name + ".");
        maybe_diagnose(file, s.add(ptr(f.ret_ref) + " " + f.name + "(" + param(f.param_ref) + ") {"), 1, f.name);
        s.add("  return {};");
        s.add("}");
        s.add("");
      }
      s.add("}  // namespace " + p.name);
      s.add("");
      for (const std::string& line : out_of_line.text) s.add(line);
      fixture_.files[file] = s.str();
    }
    fixture_.files["diagnostics.ndjson"] = diagnostics_.str();
  }

  SynthConfig config_;
  std::mt19937_64 rng_;
  std::size_t serial_ = 0;
  std::vector<ProjectGen> projects_;
  std::ostringstream diagnostics_;
  SynthFixture fixture_;
};

}  // namespace

SynthFixture synth(const SynthConfig& config) {
  if (config.projects == 0) throw Error(ErrorCode::Parameter, "synth needs at least one project");
  if (config.target_nodes < config.projects + 1) {
    throw Error(ErrorCode::Parameter, "target of " + std::to_string(config.target_nodes) + " nodes cannot hold " +
                                          std::to_string(config.projects) + " projects and the solution");
  }
  const auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!rate_ok(config.error_rate) || !rate_ok(config.warning_rate) || config.error_rate + config.warning_rate > 1.0) {
    throw Error(ErrorCode::Parameter, "error and warning rates must lie in [0, 1] and sum to at most 1");
  }
  return Generator(config).run();
}

void write_fixture(const SynthFixture& fixture, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  auto put = [&](const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  };
  for (const auto& [rel, text] : fixture.files) put(dir / rel, text);
  put(dir / "ledger.json", to_json(fixture.ledger) + "\n");
}

SynthLedger ledger_of(const EntityGraph& graph) {
  SynthLedger l;
  for (EntityKind k : kAllEntityKinds) l.entities[k] = 0;
  for (TypeKind k : kAllTypeKinds) l.type_kinds[k] = 0;
  for (Severity s : kAllSeverities) l.diagnostics[s] = 0;
  for (RelationId r : kAllRelations) l.relations[r] = graph.relation(r).size();
  for (const auto& [t, e] : graph.entities()) {
    ++l.entities[e.kind];
    if (e.type_kind) ++l.type_kinds[*e.type_kind];
    for (const Diagnostic& d : e.diagnostics) ++l.diagnostics[d.severity];
  }
  l.nodes = graph.size();
  return l;
}

std::string to_json(const SynthLedger& ledger) {
  nlohmann::ordered_json j;
  j["nodes"] = ledger.nodes;
  for (const auto& [k, n] : ledger.entities) j["entities"][std::string(to_string(k))] = n;
  for (const auto& [k, n] : ledger.type_kinds) j["typeKinds"][std::string(to_string(k))] = n;
  for (const auto& [k, n] : ledger.diagnostics) j["diagnostics"][std::string(to_string(k))] = n;
  for (const auto& [k, n] : ledger.relations) j["relations"][std::string(to_string(k))] = n;
  return j.dump(2);
}

}  // namespace codecarta
