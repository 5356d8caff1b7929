// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "codecarta/bundle.hpp"
#include "codecarta/layout.hpp"
#include "codecarta/miner.hpp"
#include "codecarta/serializer.hpp"
#include "codecarta/synth.hpp"
#include "codecarta/view_model.hpp"

namespace codecarta::cli {

namespace {

namespace fs = std::filesystem;

// Failure of one pipeline step; carries the step name into the error line.
struct StepError {
  std::string step;
  Error error;
};

template <typename F>
auto step(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw StepError{name, e};
  } catch (const std::exception& e) {
    throw StepError{name, Error(ErrorCode::Io, e.what())};
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text(const fs::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

class Printer {
 public:
  explicit Printer(std::ostream& out) : out_(out) {
    color_ = &out == &std::cout && isatty(STDOUT_FILENO) && std::getenv("NO_COLOR") == nullptr;
  }
  void done(const std::string& what) {
    out_ << (color_ ? "\033[32mok\033[0m " : "ok ") << what << '\n';
  }

 private:
  std::ostream& out_;
  bool color_ = false;
};

struct Common {
  std::string out;
  std::vector<std::string> exclude;
  std::string diagnostics;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 7;
  bool single_file = false;
  std::string config;
  std::string scaling;
};

RenderConfig render_config(const Common& c) {
  return step("config", [&] {
    RenderConfig rc = c.config.empty() ? RenderConfig{} : load_render_config(c.config);
    if (!c.scaling.empty()) {
      const auto mode = parse_scaling_mode(c.scaling);
      if (!mode) throw Error(ErrorCode::Usage, "--scaling must be linear, log or sqrt");
      rc.glyphs.scaling = *mode;
    }
    return rc;
  });
}

EntityGraph mine_step(const std::string& root, const Common& c) {
  return step("mine", [&] {
    MinerConfig mc;
    mc.root = root;
    mc.exclude_globs = c.exclude;
    if (!c.diagnostics.empty()) mc.diagnostics_file = c.diagnostics;
    mc.thread_count = c.threads;
    return mine(mc);
  });
}

// Every entity is laid out so that expanding in the viewer never needs new
// positions; forces act on declares plus the relations enabled by style.
std::string layout_step(const EntityGraph& g, const RenderConfig& rc, std::uint64_t seed) {
  return step("layout", [&] {
    ViewState view = full_view(g);
    view.enabled_relations.clear();
    for (RelationId r : kAllRelations) {
      if (edge_style(r, rc.relations).enabled) view.enabled_relations.insert(r);
    }
    LayoutOptions options;
    options.glyphs = rc.glyphs;
    return layout_snapshot_json(run_layout(g, view, rc.layout, seed, options), seed);
  });
}

std::vector<BundleFile> render_step(const EntityGraph& g, const std::string& graph_doc, const std::string& layout_doc,
                                    const RenderConfig& rc, bool single_file) {
  return step("render", [&] {
    const WebAssets assets = rc.assets ? load_assets(*rc.assets) : builtin_assets();
    return bundle({graph_doc, layout_doc, style_document(g, rc)}, assets, single_file, rc.size_budget);
  });
}

void add_out(CLI::App* cmd, Common& c, const std::string& what) {
  cmd->add_option("--out", c.out, what)->required();
}

void add_mine_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--exclude", c.exclude, "Glob of files or directories to skip (repeatable)");
  cmd->add_option("--diagnostics", c.diagnostics, "NDJSON diagnostics report to attach");
  cmd->add_option("--threads", c.threads, "Parser threads")->check(CLI::PositiveNumber);
}

void add_render_flags(CLI::App* cmd, Common& c) {
  cmd->add_flag("--single-file", c.single_file, "Inline everything into one HTML file");
  cmd->add_option("--config", c.config, "Style and layout configuration (JSON)");
  cmd->add_option("--scaling", c.scaling, "Node radius scaling: linear, log or sqrt");
}

void print_error(std::ostream& err, const std::string& step_name, const Error& e) {
  nlohmann::ordered_json j;
  j["error"]["code"] = to_string(e.code());
  j["error"]["exitCode"] = exit_code(e.code());
  j["error"]["step"] = step_name;
  j["error"]["message"] = e.what();
  if (e.position()) j["error"]["position"] = *e.position();
  err << j.dump() << '\n';
}

}  // namespace

int exit_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Usage: return 2;
    case ErrorCode::Io: return 3;
    case ErrorCode::EmptyWorkspace: return 4;
    case ErrorCode::Parse: return 5;
    case ErrorCode::Version: return 6;
    case ErrorCode::Validation: return 7;
    case ErrorCode::Format: return 8;
    case ErrorCode::Parameter: return 9;
    case ErrorCode::Build: return 10;
    case ErrorCode::NotFound: return 11;
    case ErrorCode::Kind: return 12;
    case ErrorCode::Ambiguity: return 13;
    case ErrorCode::Pattern: return 14;
    case ErrorCode::Compile: return 15;
    case ErrorCode::Name: return 16;
    case ErrorCode::Structure: return 17;
    case ErrorCode::State: return 18;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mines a C++ workspace into an entity graph and renders it as an interactive diagram."};
  app.name(args.empty() ? "codecarta" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common c;
  std::string root, graph_file, layout_file;
  SynthConfig sc;

  CLI::App* mine_cmd = app.add_subcommand("mine", "Mine a workspace into a graph document");
  mine_cmd->add_option("root", root, "Workspace root")->required();
  add_out(mine_cmd, c, "Graph document to write");
  add_mine_flags(mine_cmd, c);

  CLI::App* layout_cmd = app.add_subcommand("layout", "Lay out a graph document");
  layout_cmd->add_option("graph", graph_file, "Graph document")->required();
  add_out(layout_cmd, c, "Layout snapshot to write");
  layout_cmd->add_option("--seed", c.seed, "Layout seed");
  layout_cmd->add_option("--config", c.config, "Style and layout configuration (JSON)");
  layout_cmd->add_option("--scaling", c.scaling, "Node radius scaling: linear, log or sqrt");

  CLI::App* render_cmd = app.add_subcommand("render", "Bundle a graph document into the web viewer");
  render_cmd->add_option("graph", graph_file, "Graph document")->required();
  render_cmd->add_option("layout", layout_file, "Layout snapshot; computed when omitted");
  add_out(render_cmd, c, "Output directory, or the HTML file with --single-file");
  render_cmd->add_option("--seed", c.seed, "Layout seed when no snapshot is given");
  add_render_flags(render_cmd, c);

  CLI::App* pipeline_cmd = app.add_subcommand("pipeline", "Mine, lay out and render in one go");
  pipeline_cmd->add_option("root", root, "Workspace root")->required();
  add_out(pipeline_cmd, c, "Output directory");
  add_mine_flags(pipeline_cmd, c);
  pipeline_cmd->add_option("--seed", c.seed, "Layout seed");
  add_render_flags(pipeline_cmd, c);

  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic workspace with a ledger of expected counts");
  add_out(synth_cmd, c, "Directory to create the workspace in");
  synth_cmd->add_option("--projects", sc.projects, "Number of projects")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--target-nodes", sc.target_nodes, "Exact number of mined entities");
  synth_cmd->add_option("--seed", sc.seed, "Generator seed");
  synth_cmd->add_option("--error-rate", sc.error_rate, "Probability of an error record per declaration");
  synth_cmd->add_option("--warning-rate", sc.warning_rate, "Probability of a warning record per declaration");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    print_error(err, "arguments", Error(ErrorCode::Usage, e.what()));
    return exit_code(ErrorCode::Usage);
  }

  Printer print(out);
  try {
    if (mine_cmd->parsed()) {
      const EntityGraph g = mine_step(root, c);
      step("mine", [&] { write_text(c.out, serialize(g)); return 0; });
      print.done("mined " + std::to_string(g.size()) + " entities into " + c.out);
    } else if (layout_cmd->parsed()) {
      const RenderConfig rc = render_config(c);
      const EntityGraph g = step("layout", [&] { return deserialize(read_text(graph_file)); });
      const std::string snapshot = layout_step(g, rc, c.seed);
      step("layout", [&] { write_text(c.out, snapshot); return 0; });
      print.done("laid out " + std::to_string(g.size()) + " entities into " + c.out);
    } else if (render_cmd->parsed()) {
      const RenderConfig rc = render_config(c);
      const std::string graph_doc = step("render", [&] { return read_text(graph_file); });
      const EntityGraph g = step("render", [&] { return deserialize(graph_doc); });
      std::string layout_doc;
      if (layout_file.empty()) {
        layout_doc = layout_step(g, rc, c.seed);
      } else {
        layout_doc = step("render", [&] {
          std::string text = read_text(layout_file);
          parse_layout_snapshot(text);
          return text;
        });
      }
      const auto files = render_step(g, graph_doc, layout_doc, rc, c.single_file);
      step("render", [&] {
        if (c.single_file) {
          write_text(c.out, files.front().content);
        } else {
          write_bundle(files, c.out);
        }
        return 0;
      });
      print.done("rendered " + std::to_string(files.size()) + " file(s) into " + c.out);
    } else if (pipeline_cmd->parsed()) {
      const RenderConfig rc = render_config(c);
      const EntityGraph g = mine_step(root, c);
      const std::string graph_doc = step("mine", [&] { return serialize(g); });
      const std::string layout_doc = layout_step(g, rc, c.seed);
      const auto files = render_step(g, graph_doc, layout_doc, rc, c.single_file);
      step("render", [&] {
        const fs::path dir = c.out;
        write_bundle(files, dir);
        if (c.single_file) {
          write_text(dir / "graph.json", graph_doc);
          write_text(dir / "layout.json", layout_doc);
        }
        return 0;
      });
      print.done("pipeline wrote " + std::to_string(g.size()) + " entities to " + c.out);
    } else if (synth_cmd->parsed()) {
      const SynthFixture f = step("synth", [&] { return synth(sc); });
      step("synth", [&] { write_fixture(f, c.out); return 0; });
      print.done("synthesized " + std::to_string(f.ledger.nodes) + " entities into " + c.out);
    }
  } catch (const StepError& e) {
    print_error(err, e.step, e.error);
    return exit_code(e.error.code());
  }
  return 0;
}

}  // namespace codecarta::cli
