// SPDX-License-Identifier: Apache-2.0
#include "workspace.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "codecarta/error.hpp"

namespace codecarta::miner {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

const std::set<std::string_view> kSourceExtensions = {".h",   ".hh",  ".hpp", ".hxx", ".h++", ".ipp", ".inl",
                                                      ".tpp", ".c",   ".cc",  ".cpp", ".cxx", ".c++"};
const std::set<std::string_view> kSkippedDirs = {"build", "node_modules", "vcpkg_installed"};

constexpr std::string_view kWorkspaceManifest = "workspace.json";
constexpr std::string_view kPackageManifest = "vcpkg.json";

struct Tree {
  std::vector<std::string> dirs;
  std::vector<std::string> files;
};

Tree walk(const fs::path& root, const std::vector<std::string>& excludes) {
  Tree tree;
  std::error_code ec;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot read " + root.string() + ": " + ec.message());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw Error(ErrorCode::Io, "cannot read " + root.string() + ": " + ec.message());
    const fs::directory_entry& entry = *it;
    const std::string rel = entry.path().lexically_relative(root).generic_string();
    const std::string base = entry.path().filename().string();
    std::error_code type_ec;
    if (entry.is_directory(type_ec) && !entry.is_symlink(type_ec)) {
      if (base.starts_with(".") || kSkippedDirs.contains(base) || glob_matches(excludes, rel)) {
        it.disable_recursion_pending();
        continue;
      }
      tree.dirs.push_back(rel);
    } else if (entry.is_regular_file(type_ec)) {
      if (!glob_matches(excludes, rel)) tree.files.push_back(rel);
    }
  }
  std::sort(tree.dirs.begin(), tree.dirs.end());
  std::sort(tree.files.begin(), tree.files.end());
  return tree;
}

std::optional<json> read_json(const fs::path& path, const std::string& rel, std::vector<ManifestProblem>& problems) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    problems.push_back({rel, "cannot read manifest"});
    return std::nullopt;
  }
  std::ostringstream text;
  text << in.rdbuf();
  try {
    json j = json::parse(text.str());
    if (!j.is_object()) {
      problems.push_back({rel, "manifest is not an object"});
      return std::nullopt;
    }
    return j;
  } catch (const json::parse_error& e) {
    problems.push_back({rel, std::string("malformed manifest: ") + e.what()});
    return std::nullopt;
  }
}

std::string parent_dir(const std::string& rel) {
  const auto slash = rel.rfind('/');
  return slash == std::string::npos ? std::string() : rel.substr(0, slash);
}

std::string join(const std::string& dir, std::string_view name) {
  return dir.empty() ? std::string(name) : dir + "/" + std::string(name);
}

bool has_glob(std::string_view s) { return s.find_first_of("*?[") != std::string_view::npos; }

}  // namespace

bool glob_matches(const std::vector<std::string>& globs, const std::string& rel) {
  if (globs.empty()) return false;
  std::size_t begin = 0;
  while (true) {
    const std::size_t cut = rel.find('/', begin);
    const std::string prefix = cut == std::string::npos ? rel : rel.substr(0, cut);
    const std::string component = prefix.substr(begin);
    for (const std::string& g : globs) {
      const bool anchored = g.find('/') != std::string::npos;
      if (fnmatch(g.c_str(), (anchored ? prefix : component).c_str(), FNM_PATHNAME) == 0) return true;
    }
    if (cut == std::string::npos) return false;
    begin = cut + 1;
  }
}

Workspace discover(const MinerConfig& config) {
  const fs::path& root = config.root;
  std::error_code ec;
  const fs::file_status status = fs::status(root, ec);
  if (ec || !fs::exists(status)) throw Error(ErrorCode::Io, "root " + root.string() + " does not exist");
  if (!fs::is_directory(status)) throw Error(ErrorCode::Io, "root " + root.string() + " is not a directory");

  const Tree tree = walk(root, config.exclude_globs);
  const std::set<std::string> files(tree.files.begin(), tree.files.end());
  const std::set<std::string> dirs(tree.dirs.begin(), tree.dirs.end());

  Workspace ws;
  ws.name = fs::weakly_canonical(root, ec).filename().string();
  if (ws.name.empty()) ws.name = "workspace";

  std::vector<std::string> project_dirs;
  bool explicit_members = false;
  if (files.contains(std::string(kWorkspaceManifest))) {
    if (auto manifest = read_json(root / kWorkspaceManifest, std::string(kWorkspaceManifest), ws.problems)) {
      explicit_members = true;
      if (const auto name = manifest->find("name"); name != manifest->end() && name->is_string()) {
        ws.name = name->get<std::string>();
      }
      if (const auto diag = manifest->find("diagnostics"); diag != manifest->end() && diag->is_string()) {
        ws.diagnostics = root / diag->get<std::string>();
      }
      if (const auto members = manifest->find("members"); members != manifest->end()) {
        if (!members->is_array()) {
          ws.problems.push_back({std::string(kWorkspaceManifest), "members must be an array"});
        } else {
          for (const json& m : *members) {
            if (!m.is_string()) {
              ws.problems.push_back({std::string(kWorkspaceManifest), "member entries must be strings"});
              continue;
            }
            std::string member = m.get<std::string>();
            while (member.ends_with("/") && member.size() > 1) member.pop_back();
            if (member == "." || member.empty()) {
              project_dirs.emplace_back();
            } else if (has_glob(member)) {
              for (const std::string& d : tree.dirs) {
                if (fnmatch(member.c_str(), d.c_str(), FNM_PATHNAME) == 0) project_dirs.push_back(d);
              }
            } else if (dirs.contains(member)) {
              project_dirs.push_back(member);
            } else {
              ws.problems.push_back({std::string(kWorkspaceManifest), "member '" + member + "' not found"});
            }
          }
        }
      }
    }
  }
  if (!explicit_members) {
    for (const std::string& f : tree.files) {
      if (f == kPackageManifest || f.ends_with("/" + std::string(kPackageManifest))) project_dirs.push_back(parent_dir(f));
    }
  }

  for (const std::string& f : tree.files) {
    const auto dot = f.rfind('.');
    if (dot == std::string::npos || f.find('/', dot) != std::string::npos) continue;
    if (!kSourceExtensions.contains(std::string_view(f).substr(dot))) continue;
    if (!config.include_globs.empty() && !glob_matches(config.include_globs, f)) continue;
    ws.sources.push_back(f);
  }

  if (!explicit_members && project_dirs.empty()) {
    if (ws.sources.empty() && !files.contains(std::string(kWorkspaceManifest))) {
      throw Error(ErrorCode::EmptyWorkspace, "no manifest and no source file under " + root.string());
    }
    project_dirs.emplace_back();
  }
  std::sort(project_dirs.begin(), project_dirs.end());
  project_dirs.erase(std::unique(project_dirs.begin(), project_dirs.end()), project_dirs.end());

  for (const std::string& dir : project_dirs) {
    ProjectInfo p;
    p.dir = dir;
    p.name = dir.empty() ? ws.name : dir.substr(dir.rfind('/') == std::string::npos ? 0 : dir.rfind('/') + 1);
    const std::string manifest = join(dir, kPackageManifest);
    if (files.contains(manifest)) {
      p.manifest = manifest;
      if (auto j = read_json(root / manifest, manifest, p.problems)) {
        if (const auto name = j->find("name"); name != j->end() && name->is_string()) p.name = name->get<std::string>();
        if (const auto deps = j->find("dependencies"); deps != j->end()) {
          if (!deps->is_array()) {
            p.problems.push_back({manifest, "dependencies must be an array"});
          } else {
            for (const json& d : *deps) {
              std::string name;
              if (d.is_string()) {
                name = d.get<std::string>();
              } else if (d.is_object() && d.contains("name") && d["name"].is_string()) {
                name = d["name"].get<std::string>();
              } else {
                p.problems.push_back({manifest, "malformed dependency entry"});
                continue;
              }
              if (std::find(p.dependencies.begin(), p.dependencies.end(), name) == p.dependencies.end()) {
                p.dependencies.push_back(std::move(name));
              }
            }
          }
        }
      }
    }
    ws.projects.push_back(std::move(p));
  }
  return ws;
}

}  // namespace codecarta::miner
