// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codecarta/entity_model.hpp"
#include "codecarta/glyph.hpp"
#include "codecarta/layout.hpp"

namespace codecarta {

inline constexpr std::size_t kDefaultSizeBudget = 15'000'000;
inline constexpr std::string_view kStyleVersion = "codecarta-style/1";

/// Contents of the --config file. Every key is optional:
///   {"baseRadius": {"type": 10, ...}, "memberWeight": 0.5,
///    "scalingMode": "linear" | "log" | "sqrt",
///    "relationStyles": {"typeOf": {"color": "#rrggbb", "lineWeight": 1.5, "enabled": true}},
///    "layout": {"ringSpacing", "minAngularGap", "maxIterations", "convergenceThreshold",
///               "repulsionStrength", "gravity", "thetaApprox", "strongGravity", "jitterTolerance"},
///    "sizeBudget": bytes, "assets": "directory with index.html, app.js, style.css"}
struct RenderConfig {
  GlyphConfig glyphs;
  EdgeStyleOverrides relations;
  LayoutConfig layout;
  std::size_t size_budget = kDefaultSizeBudget;
  std::optional<std::filesystem::path> assets;
};

/// Throws Error(Format) for malformed text or unknown keys and
/// Error(Parameter) for out-of-range values. Relative asset paths resolve
/// against `base_dir`.
RenderConfig parse_render_config(std::string_view text, const std::filesystem::path& base_dir = {});
RenderConfig load_render_config(const std::filesystem::path& file);

/// Glyph and edge data the web app draws from: one GlyphSpec per entity
/// keyed by token text plus the merged style of every relation.
std::string style_document(const EntityGraph& graph, const RenderConfig& config);

struct WebAssets {
  std::string index_html;
  std::string app_js;
  std::string style_css;
};

/// The prebuilt web app compiled into the binary.
const WebAssets& builtin_assets();

/// Reads index.html, app.js and style.css from `dir`. Throws Error(Build)
/// naming the missing file and how to obtain a copy.
WebAssets load_assets(const std::filesystem::path& dir);

struct BundleInput {
  std::string graph_document;
  std::string layout_document;
  std::string style_document;
};

struct BundleFile {
  std::string path;  // relative, '/' separated
  std::string content;
};

/// Multi-file mode: index.html, app.js, style.css, graph.json, layout.json
/// and style.json. Single-file mode: one index.html with scripts and styles
/// inline and each document in a data block
///   <script type="application/octet-stream" id="codecarta-graph"
///           data-encoding="base64" data-length="N">...</script>
/// where N is the decoded byte length. Throws Error(Build) when the single
/// file exceeds `size_budget` or the assets lack an injection point.
std::vector<BundleFile> bundle(const BundleInput& input, const WebAssets& assets, bool single_file,
                               std::size_t size_budget = kDefaultSizeBudget);

/// Writes the files below `out` (a directory). Throws Error(Io).
void write_bundle(const std::vector<BundleFile>& files, const std::filesystem::path& out);

/// Payload of the data block with the given id, decoded. Absent when the
/// block is missing or its length prefix disagrees with the payload.
std::optional<std::string> extract_data_block(std::string_view html, std::string_view id);

/// Absolute or protocol-relative URL references in HTML, CSS or script
/// text: scheme URLs such as http:// or file://, and src/href/url()
/// values starting with "//".
std::vector<std::string> find_external_references(std::string_view text);

std::string base64_encode(std::string_view bytes);
/// Absent for malformed input.
std::optional<std::string> base64_decode(std::string_view text);

}  // namespace codecarta
