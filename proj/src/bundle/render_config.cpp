// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "codecarta/bundle.hpp"
#include "codecarta/error.hpp"

namespace codecarta {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Format, "render config: " + what); }

void only_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) bad(where + " must be an object");
  const std::set<std::string_view> allowed(keys);
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) bad("unknown key '" + k + "' in " + where);
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  return j.get<double>();
}

bool boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) bad(where + " must be true or false");
  return j.get<bool>();
}

std::uint64_t count(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    bad(where + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

bool is_color(const std::string& s) {
  if (s.size() != 7 || s[0] != '#') return false;
  return s.find_first_not_of("0123456789abcdefABCDEF", 1) == std::string::npos;
}

void read_layout(const json& j, LayoutConfig& l) {
  only_keys(j, "layout",
            {"ringSpacing", "minAngularGap", "maxIterations", "convergenceThreshold", "repulsionStrength", "gravity",
             "thetaApprox", "strongGravity", "jitterTolerance"});
  for (const auto& [k, v] : j.items()) {
    const std::string where = "layout." + k;
    if (k == "ringSpacing") l.ring_spacing = number(v, where);
    if (k == "minAngularGap") l.min_angular_gap = number(v, where);
    if (k == "maxIterations") l.max_iterations = count(v, where);
    if (k == "convergenceThreshold") l.convergence_threshold = number(v, where);
    if (k == "repulsionStrength") l.forces.repulsion_strength = number(v, where);
    if (k == "gravity") l.forces.gravity = number(v, where);
    if (k == "thetaApprox") l.forces.theta_approx = number(v, where);
    if (k == "strongGravity") l.forces.strong_gravity = boolean(v, where);
    if (k == "jitterTolerance") l.forces.jitter_tolerance = number(v, where);
  }
}

}  // namespace

RenderConfig parse_render_config(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann counts bytes from 1; Format errors report a 1-based line.
    const std::size_t offset = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n');
    throw Error(ErrorCode::Format, std::string("render config: ") + e.what(), static_cast<std::size_t>(line));
  }
  only_keys(j, "the document",
            {"baseRadius", "memberWeight", "scalingMode", "relationStyles", "layout", "sizeBudget", "assets"});
  RenderConfig c;
  for (const auto& [k, v] : j.items()) {
    if (k == "baseRadius") {
      if (!v.is_object()) bad("baseRadius must be an object");
      for (const auto& [kind, r] : v.items()) {
        const auto parsed = parse_entity_kind(kind);
        if (!parsed) bad("unknown entity kind '" + kind + "' in baseRadius");
        c.glyphs.base_radius[*parsed] = number(r, "baseRadius." + kind);
      }
    } else if (k == "memberWeight") {
      c.glyphs.member_weight = number(v, k);
    } else if (k == "scalingMode") {
      if (!v.is_string()) bad("scalingMode must be a string");
      const auto mode = parse_scaling_mode(v.get<std::string>());
      if (!mode) throw Error(ErrorCode::Parameter, "unknown scaling mode '" + v.get<std::string>() + "'");
      c.glyphs.scaling = *mode;
    } else if (k == "relationStyles") {
      if (!v.is_object()) bad("relationStyles must be an object");
      for (const auto& [rel, style] : v.items()) {
        const auto id = parse_relation(rel);
        if (!id) bad("unknown relation '" + rel + "' in relationStyles");
        only_keys(style, "relationStyles." + rel, {"color", "lineWeight", "enabled"});
        EdgeStyleOverride& o = c.relations[*id];
        if (style.contains("color")) {
          const json& color = style.at("color");
          if (!color.is_string() || !is_color(color.get<std::string>())) {
            throw Error(ErrorCode::Parameter, "relationStyles." + rel + ".color must look like #rrggbb");
          }
          o.color = color.get<std::string>();
        }
        if (style.contains("lineWeight")) {
          o.line_weight = number(style.at("lineWeight"), "relationStyles." + rel + ".lineWeight");
          if (!(*o.line_weight > 0.0)) throw Error(ErrorCode::Parameter, "line weights must be positive");
        }
        if (style.contains("enabled")) o.enabled = boolean(style.at("enabled"), "relationStyles." + rel + ".enabled");
      }
    } else if (k == "layout") {
      read_layout(v, c.layout);
    } else if (k == "sizeBudget") {
      c.size_budget = count(v, k);
    } else if (k == "assets") {
      if (!v.is_string()) bad("assets must be a path");
      const std::filesystem::path p = v.get<std::string>();
      c.assets = p.is_absolute() ? p : base_dir / p;
    }
  }
  c.glyphs.check();
  c.layout.check();
  return c;
}

RenderConfig load_render_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read config " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_render_config(text.str(), file.parent_path());
}

}  // namespace codecarta
