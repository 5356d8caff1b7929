// SPDX-License-Identifier: Apache-2.0
#include "codecarta/token.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "codecarta/error.hpp"

namespace codecarta {

std::optional<Token> Token::parent() const {
  if (path_.size() <= 1) return std::nullopt;
  return Token(std::vector<std::uint32_t>(path_.begin(), path_.end() - 1));
}

Token Token::child(std::uint32_t ordinal) const {
  std::vector<std::uint32_t> path = path_;
  path.push_back(ordinal);
  return Token(std::move(path));
}

bool is_ancestor(const Token& a, const Token& b) noexcept {
  auto pa = a.path();
  auto pb = b.path();
  return pa.size() < pb.size() && std::equal(pa.begin(), pa.end(), pb.begin());
}

std::string render_token(const Token& token) {
  std::string out;
  for (std::size_t i = 0; i < token.depth(); ++i) {
    if (i != 0) out.push_back('.');
    out += std::to_string(token.path()[i]);
  }
  return out;
}

Token parse_token(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::Parse, "empty token", 0);
  std::vector<std::uint32_t> path;
  std::size_t i = 0;
  while (true) {
    const std::size_t start = i;
    std::uint64_t value = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      value = value * 10 + static_cast<std::uint64_t>(text[i] - '0');
      if (value > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::Parse, "token ordinal out of range", start);
      }
      ++i;
    }
    if (i == start) throw Error(ErrorCode::Parse, "expected digit in token", i);
    if (text[start] == '0' && i - start > 1) {
      throw Error(ErrorCode::Parse, "leading zero in token ordinal", start);
    }
    path.push_back(static_cast<std::uint32_t>(value));
    if (i == text.size()) break;
    if (text[i] != '.') throw Error(ErrorCode::Parse, "unexpected character in token", i);
    ++i;
  }
  return Token(std::move(path));
}

std::vector<Token> assign_tokens(std::span<const ForestNode> forest) {
  const std::size_t n = forest.size();
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (const auto& p = forest[i].parent) {
      if (*p >= n || *p == i) {
        throw Error(ErrorCode::Structure, "forest node " + std::to_string(i) + " has an invalid parent");
      }
      children[*p].push_back(i);
    } else {
      roots.push_back(i);
    }
  }

  auto key = [&](std::size_t i) {
    return sibling_key(forest[i].kind, forest[i].name, forest[i].disambiguator);
  };
  auto order = [&](std::vector<std::size_t>& siblings, std::optional<std::size_t> parent) {
    std::sort(siblings.begin(), siblings.end(),
              [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    for (std::size_t k = 1; k < siblings.size(); ++k) {
      if (key(siblings[k - 1]) == key(siblings[k])) {
        const auto& dup = forest[siblings[k]];
        std::string where = parent ? "'" + forest[*parent].name + "'" : std::string("the forest root");
        throw Error(ErrorCode::Ambiguity,
                    "ambiguous siblings under " + where + ": " + std::string(to_string(dup.kind)) + " '" +
                        dup.name + "'" + (dup.disambiguator.empty() ? "" : " " + dup.disambiguator));
      }
    }
  };

  std::vector<Token> tokens(n);
  order(roots, std::nullopt);
  std::vector<std::size_t> stack;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    tokens[roots[r]] = Token{static_cast<std::uint32_t>(r)};
    stack.push_back(roots[r]);
  }
  std::size_t visited = 0;
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    ++visited;
    auto& kids = children[node];
    order(kids, node);
    for (std::size_t k = 0; k < kids.size(); ++k) {
      tokens[kids[k]] = tokens[node].child(static_cast<std::uint32_t>(k));
      stack.push_back(kids[k]);
    }
  }
  if (visited != n) {
    throw Error(ErrorCode::Structure, "declares forest contains a cycle unreachable from any root");
  }
  return tokens;
}

}  // namespace codecarta
