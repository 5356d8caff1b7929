// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <tuple>

#include "codecarta/error.hpp"
#include "codecarta/miner.hpp"

namespace codecarta {

namespace {

using json = nlohmann::json;

Diagnostic read_record(const json& j, std::size_t line) {
  auto bad = [&](const std::string& what) { return Error(ErrorCode::Format, "diagnostics line " + std::to_string(line) + ": " + what, line); };
  if (!j.is_object()) throw bad("record is not an object");
  Diagnostic d;
  const auto severity = j.find("severity");
  if (severity == j.end() || !severity->is_string()) throw bad("missing severity");
  const auto parsed = parse_severity(severity->get<std::string>());
  if (!parsed) throw bad("unknown severity '" + severity->get<std::string>() + "'");
  d.severity = *parsed;
  const auto message = j.find("message");
  if (message == j.end() || !message->is_string()) throw bad("missing message");
  d.message = message->get<std::string>();
  if (const auto code = j.find("code"); code != j.end() && !code->is_null()) {
    if (!code->is_string()) throw bad("code must be a string");
    d.code = code->get<std::string>();
  }
  const auto file = j.find("file");
  if (file != j.end() && !file->is_null()) {
    if (!file->is_string()) throw bad("file must be a string");
    SourceLocation loc;
    loc.file = file->get<std::string>();
    for (auto& c : loc.file) {
      if (c == '\\') c = '/';
    }
    while (loc.file.starts_with("./")) loc.file.erase(0, 2);
    for (const char* key : {"line", "column"}) {
      const auto v = j.find(key);
      if (v == j.end() || v->is_null()) continue;
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
        throw bad(std::string(key) + " must be a non-negative integer");
      }
      const auto n = v->get<std::uint64_t>();
      if (n > 0xffffffffu) throw bad(std::string(key) + " out of range");
      (std::string_view(key) == "line" ? loc.line : loc.column) = static_cast<std::uint32_t>(n);
    }
    d.location = std::move(loc);
  }
  return d;
}

struct Attacher {
  explicit Attacher(const EntityGraph& graph) : graph_(graph) {
    for (const auto& [token, e] : graph.entities()) {
      std::size_t depth = 0;
      for (auto p = graph.declaring_parent(token); p; p = graph.declaring_parent(*p)) ++depth;
      depth_[token] = depth;
      for (const SourceSpan& s : e.spans) by_file_[s.file].push_back({&token, &s});
      if (e.kind == EntityKind::Project) {
        const auto path = e.extra.find("path");
        if (path != e.extra.end() && std::holds_alternative<std::string>(path->second)) {
          projects_.emplace_back(std::get<std::string>(path->second), token);
        }
      }
      if (e.kind == EntityKind::Solution && !solution_) solution_ = token;
    }
  }

  Token target(const std::optional<SourceLocation>& loc) const {
    if (loc) {
      const Token* best = nullptr;
      std::tuple<std::size_t, std::int64_t, std::int64_t> best_key{};
      if (const auto it = by_file_.find(loc->file); it != by_file_.end()) {
        for (const auto& [token, span] : it->second) {
          if (!span->contains(*loc)) continue;
          // Deeper wins, then the tighter span, then token order.
          const std::tuple<std::size_t, std::int64_t, std::int64_t> key{
              depth_.at(*token), -static_cast<std::int64_t>(span->end_line - span->begin_line),
              -(static_cast<std::int64_t>(span->end_column) - static_cast<std::int64_t>(span->begin_column))};
          if (!best || key > best_key || (key == best_key && *token < *best)) {
            best = token;
            best_key = key;
          }
        }
      }
      if (best) return *best;
      const Token* project = nullptr;
      std::size_t longest = 0;
      for (const auto& [path, token] : projects_) {
        const bool inside = path.empty() || loc->file == path || loc->file.starts_with(path + "/");
        if (!inside) continue;
        if (!project || path.size() > longest || (path.size() == longest && token < *project)) {
          project = &token;
          longest = path.size();
        }
      }
      if (project) return *project;
    }
    if (!solution_) throw Error(ErrorCode::Validation, "graph has no Solution to attach diagnostics to");
    return *solution_;
  }

 private:
  struct Entry {
    const Token* token;
    const SourceSpan* span;
  };
  const EntityGraph& graph_;
  std::map<Token, std::size_t> depth_;
  std::map<std::string, std::vector<Entry>> by_file_;
  std::vector<std::pair<std::string, Token>> projects_;
  std::optional<Token> solution_;
};

}  // namespace

EntityGraph ingest_diagnostics(const EntityGraph& graph, std::string_view report) {
  std::vector<Diagnostic> records;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < report.size()) {
    std::size_t end = report.find('\n', start);
    if (end == std::string_view::npos) end = report.size();
    const std::string_view line = report.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::Format, "diagnostics line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    records.push_back(read_record(j, line_no));
  }
  if (records.empty()) return graph;

  const Attacher attacher(graph);
  EntityMap entities = graph.entities();
  for (Diagnostic& d : records) {
    const Token target = attacher.target(d.location);
    entities.at(target).diagnostics.push_back(std::move(d));
  }
  return EntityGraph(std::move(entities), graph.relations(), graph.schema_version());
}

EntityGraph ingest_diagnostics_file(const EntityGraph& graph, const std::filesystem::path& report) {
  std::ifstream in(report, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read diagnostics file " + report.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ingest_diagnostics(graph, text.str());
}

}  // namespace codecarta
