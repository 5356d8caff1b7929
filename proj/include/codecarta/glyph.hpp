// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "codecarta/entity_model.hpp"

namespace codecarta {

enum class ScalingMode { Linear, Logarithmic, SquareRoot };

std::string_view to_string(ScalingMode mode) noexcept;
/// Accepts "linear", "log"/"logarithmic" and "sqrt"/"squareRoot".
std::optional<ScalingMode> parse_scaling_mode(std::string_view text) noexcept;

struct GlyphConfig {
  std::map<EntityKind, double> base_radius = {
      {EntityKind::Solution, 16.0}, {EntityKind::Project, 14.0}, {EntityKind::Package, 12.0},
      {EntityKind::Namespace, 10.0}, {EntityKind::Type, 10.0},   {EntityKind::Field, 5.0},
      {EntityKind::Method, 5.0},     {EntityKind::Property, 5.0}, {EntityKind::Event, 5.0},
  };
  double member_weight = 0.5;
  ScalingMode scaling = ScalingMode::Linear;
  /// Logarithmic and square-root scaling map this value onto itself, so the
  /// three modes agree on an empty type at the default base radius.
  double scale_anchor = 10.0;
  /// Outline width = clamp(count / outline_divisor, 0, outline_max_width).
  double outline_divisor = 5.0;
  double outline_max_width = 4.0;

  /// Throws Error(Parameter) when a radius is missing or non-positive, or
  /// when the project base radius does not exceed the type base radius.
  void check() const;
};

/// Strictly increasing on positive inputs for every mode.
double scale_radius(double value, ScalingMode mode, double anchor);

enum class OutlineStyle { Solid, Dashed };
enum class Effect { None, Smoke, Fire };

std::string_view to_string(OutlineStyle style) noexcept;
std::string_view to_string(Effect effect) noexcept;

struct OutlineSpec {
  OutlineStyle style = OutlineStyle::Solid;
  double width = 0.0;
  /// Fraction of the tint's saturation used for this ring.
  double saturation = 1.0;

  friend bool operator==(const OutlineSpec&, const OutlineSpec&) = default;
};

struct GlyphSpec {
  std::string icon_id;
  std::string tint;  // "#rrggbb"
  std::optional<std::string> corner_icon_id;
  OutlineSpec inner;   // static modifier
  OutlineSpec middle;  // instance members, always solid
  OutlineSpec outer;   // static members, always dashed
  double radius = 0.0;
  Effect effect = Effect::None;

  friend bool operator==(const GlyphSpec&, const GlyphSpec&) = default;
};

double node_radius(const Entity& entity, const GlyphConfig& config = {});

GlyphSpec glyph_for(const Entity& entity, const GlyphConfig& config = {});

/// Icon identifier for a kind (types use their type kind).
std::string icon_id(const Entity& entity);
std::string tint_for_icon(std::string_view icon);
/// Absent for Public (and for entities without an accessibility).
std::optional<std::string> corner_icon_id(std::optional<Accessibility> access);

struct EdgeStyle {
  RelationId relation = RelationId::Declares;
  std::string color;
  double line_weight = 1.0;
  bool enabled = false;

  friend bool operator==(const EdgeStyle&, const EdgeStyle&) = default;
};

struct EdgeStyleOverride {
  std::optional<std::string> color;
  std::optional<double> line_weight;
  std::optional<bool> enabled;
};

using EdgeStyleOverrides = std::map<RelationId, EdgeStyleOverride>;

EdgeStyle default_edge_style(RelationId relation);

/// Defaults merged with user overrides. declares stays enabled whatever the
/// overrides say. Throws Error(NotFound) for an unknown relation id.
EdgeStyle edge_style(std::string_view relation, const EdgeStyleOverrides& overrides = {});
EdgeStyle edge_style(RelationId relation, const EdgeStyleOverrides& overrides = {});

}  // namespace codecarta
