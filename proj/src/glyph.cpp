// SPDX-License-Identifier: Apache-2.0
#include "codecarta/glyph.hpp"

#include <algorithm>
#include <cmath>

#include "codecarta/error.hpp"

namespace codecarta {

std::string_view to_string(ScalingMode mode) noexcept {
  switch (mode) {
    case ScalingMode::Linear: return "linear";
    case ScalingMode::Logarithmic: return "log";
    case ScalingMode::SquareRoot: return "sqrt";
  }
  return "";
}

std::optional<ScalingMode> parse_scaling_mode(std::string_view text) noexcept {
  if (text == "linear") return ScalingMode::Linear;
  if (text == "log" || text == "logarithmic") return ScalingMode::Logarithmic;
  if (text == "sqrt" || text == "squareRoot") return ScalingMode::SquareRoot;
  return std::nullopt;
}

std::string_view to_string(OutlineStyle style) noexcept {
  return style == OutlineStyle::Dashed ? "dashed" : "solid";
}

std::string_view to_string(Effect effect) noexcept {
  switch (effect) {
    case Effect::None: return "none";
    case Effect::Smoke: return "smoke";
    case Effect::Fire: return "fire";
  }
  return "";
}

void GlyphConfig::check() const {
  for (EntityKind kind : kAllEntityKinds) {
    auto it = base_radius.find(kind);
    if (it == base_radius.end() || !(it->second > 0.0) || !std::isfinite(it->second)) {
      throw Error(ErrorCode::Parameter,
                  "base radius for " + std::string(to_string(kind)) + " must be a positive number");
    }
  }
  if (!(base_radius.at(EntityKind::Project) > base_radius.at(EntityKind::Type))) {
    throw Error(ErrorCode::Parameter, "project base radius must exceed the type base radius");
  }
  if (!(member_weight >= 0.0)) throw Error(ErrorCode::Parameter, "member weight must be non-negative");
  if (!(scale_anchor > 0.0)) throw Error(ErrorCode::Parameter, "scale anchor must be positive");
  if (!(outline_divisor > 0.0) || !(outline_max_width > 0.0)) {
    throw Error(ErrorCode::Parameter, "outline divisor and maximum width must be positive");
  }
}

double scale_radius(double value, ScalingMode mode, double anchor) {
  switch (mode) {
    case ScalingMode::Linear: return value;
    case ScalingMode::Logarithmic: return anchor * std::log1p(value) / std::log1p(anchor);
    case ScalingMode::SquareRoot: return std::sqrt(value * anchor);
  }
  return value;
}

double node_radius(const Entity& entity, const GlyphConfig& config) {
  double value = config.base_radius.at(entity.kind);
  if (entity.kind == EntityKind::Type) value += config.member_weight * entity.member_count();
  return scale_radius(value, config.scaling, config.scale_anchor);
}

std::string icon_id(const Entity& entity) {
  if (entity.kind == EntityKind::Type && entity.type_kind) {
    return std::string(to_string(*entity.type_kind));
  }
  return std::string(to_string(entity.kind));
}

std::string tint_for_icon(std::string_view icon) {
  // Luminance values are spread apart so the palette survives the grayscale
  // de-emphasis used by highlighting.
  static const std::map<std::string_view, std::string_view> kTints = {
      {"solution", "#4b2a7b"},  {"project", "#1f5fa8"}, {"package", "#8a5a2b"},
      {"namespace", "#5e6b73"}, {"class", "#e0b020"},   {"struct", "#3f9be0"},
      {"enum", "#c8742c"},      {"interface", "#63b867"}, {"delegate", "#b04a8f"},
      {"field", "#49a6a0"},     {"method", "#9b6fd0"},  {"property", "#a8a8a8"},
      {"event", "#d9d36b"},
  };
  auto it = kTints.find(icon);
  return it == kTints.end() ? "#808080" : std::string(it->second);
}

std::optional<std::string> corner_icon_id(std::optional<Accessibility> access) {
  if (!access || *access == Accessibility::Public) return std::nullopt;
  switch (*access) {
    case Accessibility::Internal: return "access-internal";
    case Accessibility::Protected: return "access-protected";
    case Accessibility::ProtectedInternal: return "access-protected-internal";
    case Accessibility::PrivateProtected: return "access-private-protected";
    case Accessibility::Private: return "access-private";
    case Accessibility::Public: break;
  }
  return std::nullopt;
}

namespace {

constexpr double kInnerWidth = 1.0;
constexpr double kInnerSaturation = 1.0;
constexpr double kMiddleSaturation = 0.7;
constexpr double kOuterSaturation = 0.4;

double outline_width(std::uint32_t count, const GlyphConfig& config) {
  return std::clamp(static_cast<double>(count) / config.outline_divisor, 0.0, config.outline_max_width);
}

}  // namespace

GlyphSpec glyph_for(const Entity& entity, const GlyphConfig& config) {
  GlyphSpec spec;
  spec.icon_id = icon_id(entity);
  spec.tint = tint_for_icon(spec.icon_id);
  spec.corner_icon_id = corner_icon_id(entity.accessibility);
  spec.inner = {entity.is_static ? OutlineStyle::Dashed : OutlineStyle::Solid, kInnerWidth, kInnerSaturation};
  spec.middle = {OutlineStyle::Solid, 0.0, kMiddleSaturation};
  spec.outer = {OutlineStyle::Dashed, 0.0, kOuterSaturation};
  if (entity.kind == EntityKind::Type) {
    spec.middle.width = outline_width(entity.instance_member_count, config);
    spec.outer.width = outline_width(entity.static_member_count, config);
  }
  spec.radius = node_radius(entity, config);
  if (entity.has_severity(Severity::Error)) {
    spec.effect = Effect::Fire;
  } else if (entity.has_severity(Severity::Warning)) {
    spec.effect = Effect::Smoke;
  }
  return spec;
}

EdgeStyle default_edge_style(RelationId relation) {
  switch (relation) {
    case RelationId::Declares: return {relation, "#9e9e9e", 1.0, true};
    case RelationId::InheritsFrom: return {relation, "#008080", 2.0, false};
    case RelationId::TypeOf: return {relation, "#e67e22", 1.5, false};
    case RelationId::Returns: return {relation, "#8e44ad", 1.25, false};
    case RelationId::DependsOn: return {relation, "#c0392b", 2.5, false};
  }
  return {relation, "#000000", 1.0, false};
}

EdgeStyle edge_style(RelationId relation, const EdgeStyleOverrides& overrides) {
  EdgeStyle style = default_edge_style(relation);
  if (auto it = overrides.find(relation); it != overrides.end()) {
    const EdgeStyleOverride& o = it->second;
    if (o.color) style.color = *o.color;
    if (o.line_weight) style.line_weight = *o.line_weight;
    if (o.enabled) style.enabled = *o.enabled;
  }
  if (relation == RelationId::Declares) style.enabled = true;
  return style;
}

EdgeStyle edge_style(std::string_view relation, const EdgeStyleOverrides& overrides) {
  auto id = parse_relation(relation);
  if (!id) throw Error(ErrorCode::NotFound, "unknown relation '" + std::string(relation) + "'");
  return edge_style(*id, overrides);
}

}  // namespace codecarta
