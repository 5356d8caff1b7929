// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codecarta/entity_kind.hpp"

namespace codecarta {

/// Hierarchical numeric identifier: the path of sibling ordinals from a
/// declares root down to an entity. Ordered lexicographically.
class Token {
 public:
  Token() = default;
  Token(std::initializer_list<std::uint32_t> path) : path_(path) {}
  explicit Token(std::vector<std::uint32_t> path) : path_(std::move(path)) {}

  std::span<const std::uint32_t> path() const noexcept { return path_; }
  std::size_t depth() const noexcept { return path_.size(); }
  bool empty() const noexcept { return path_.empty(); }
  bool is_root() const noexcept { return path_.size() == 1; }

  /// Drops the last ordinal; nullopt for roots.
  std::optional<Token> parent() const;
  Token child(std::uint32_t ordinal) const;

  friend bool operator==(const Token&, const Token&) = default;
  friend std::strong_ordering operator<=>(const Token& a, const Token& b) {
    return a.path_ <=> b.path_;
  }

 private:
  std::vector<std::uint32_t> path_;
};

/// True iff `a` is a strict prefix of `b`.
bool is_ancestor(const Token& a, const Token& b) noexcept;

/// Dotted decimal form, e.g. "0.3.12".
std::string render_token(const Token& token);

/// Inverse of render_token. Grammar: uint ("." uint)*, no leading zeros.
/// Throws Error(Parse) with the byte offset of the first offending character.
Token parse_token(std::string_view text);

/// One node of a declares forest handed to assign_tokens. `parent` indexes
/// into the same node vector.
struct ForestNode {
  EntityKind kind = EntityKind::Solution;
  std::string name;
  std::string disambiguator;
  std::optional<std::size_t> parent;
};

/// Sibling ordering key shared by token assignment and children().
/// Kind rank, then case-sensitive name, then disambiguator; the kind ordinal
/// breaks the remaining ties between different kinds of equal rank.
struct SiblingKey {
  int rank;
  std::string_view name;
  std::string_view disambiguator;
  EntityKind kind;

  friend auto operator<=>(const SiblingKey&, const SiblingKey&) = default;
  friend bool operator==(const SiblingKey&, const SiblingKey&) = default;
};

inline SiblingKey sibling_key(EntityKind kind, std::string_view name,
                              std::string_view disambiguator) {
  return {kind_rank(kind), name, disambiguator, kind};
}

/// Assigns a token to every forest node. The result is indexed like `forest`
/// and depends only on the (kind, name, disambiguator) structure, never on
/// the order nodes appear in the input.
///
/// Throws Error(Ambiguity) naming the parent when two siblings share kind,
/// name and disambiguator, and Error(Structure) when the input is not a
/// single-parent acyclic forest.
std::vector<Token> assign_tokens(std::span<const ForestNode> forest);

}  // namespace codecarta
