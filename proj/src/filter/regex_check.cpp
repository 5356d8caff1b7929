// SPDX-License-Identifier: Apache-2.0
#include "regex_check.hpp"

#include <cctype>
#include <vector>

namespace codecarta::detail {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Length of the "{n}", "{n,}" or "{n,m}" quantifier at `at`, or what is
// wrong with it.
struct Brace {
  std::size_t length = 0;
  std::optional<RegexProblem> problem;
};

Brace read_brace(std::string_view p, std::size_t at) {
  std::size_t i = at + 1;
  auto number = [&](std::size_t& value) {
    const std::size_t start = i;
    value = 0;
    while (i < p.size() && is_digit(p[i])) value = value * 10 + static_cast<std::size_t>(p[i++] - '0');
    return i > start;
  };
  std::size_t lo = 0, hi = 0;
  if (!number(lo)) return {0, RegexProblem{i, "repetition count expected"}};
  if (i < p.size() && p[i] == ',') {
    ++i;
    if (number(hi) && hi < lo) return {0, RegexProblem{at, "repetition range out of order"}};
  }
  if (i >= p.size()) return {0, RegexProblem{at, "unterminated repetition"}};
  if (p[i] != '}') return {0, RegexProblem{i, "'}' expected"}};
  return {i + 1 - at, std::nullopt};
}

std::optional<RegexProblem> check_escape(std::string_view p, std::size_t at, std::size_t groups_so_far) {
  if (at + 1 >= p.size()) return RegexProblem{at, "trailing backslash"};
  const char c = p[at + 1];
  if (c == 'c' && (at + 2 >= p.size() || !std::isalpha(static_cast<unsigned char>(p[at + 2])))) {
    return RegexProblem{at, "control escape needs a letter"};
  }
  if (c == 'x' || c == 'u') {
    const std::size_t need = c == 'x' ? 2 : 4;
    for (std::size_t k = 0; k < need; ++k) {
      if (at + 2 + k >= p.size() || !std::isxdigit(static_cast<unsigned char>(p[at + 2 + k]))) {
        return RegexProblem{at, "incomplete hexadecimal escape"};
      }
    }
  }
  if (c >= '1' && c <= '9') {
    std::size_t index = 0;
    for (std::size_t k = at + 1; k < p.size() && is_digit(p[k]); ++k) index = index * 10 + static_cast<std::size_t>(p[k] - '0');
    if (index > groups_so_far) return RegexProblem{at, "back-reference to a missing group"};
  }
  return std::nullopt;
}

}  // namespace

std::optional<RegexProblem> check_regex(std::string_view p) {
  std::vector<std::size_t> open;
  std::size_t groups = 0;
  bool can_repeat = false;
  std::size_t i = 0;
  while (i < p.size()) {
    const char c = p[i];
    switch (c) {
      case '\\': {
        if (auto problem = check_escape(p, i, groups)) return problem;
        const char e = p[i + 1];
        // Word-boundary assertions take no quantifier.
        can_repeat = e != 'b' && e != 'B';
        i += 2;
        continue;
      }
      case '(':
        if (i + 1 < p.size() && p[i + 1] == '?') {
          if (i + 2 >= p.size() || (p[i + 2] != ':' && p[i + 2] != '=' && p[i + 2] != '!')) {
            return RegexProblem{i, "unsupported group syntax"};
          }
          open.push_back(i);
          i += 3;
        } else {
          open.push_back(i);
          ++groups;
          ++i;
        }
        can_repeat = false;
        continue;
      case ')':
        if (open.empty()) return RegexProblem{i, "unmatched ')'"};
        open.pop_back();
        can_repeat = true;
        ++i;
        continue;
      case '|':
      case '^':
      case '$':
        can_repeat = false;
        ++i;
        continue;
      case '*':
      case '+':
      case '?':
        if (!can_repeat) return RegexProblem{i, "nothing to repeat"};
        ++i;
        continue;
      case '{': {
        if (!can_repeat) return RegexProblem{i, "nothing to repeat"};
        const Brace brace = read_brace(p, i);
        if (brace.problem) return brace.problem;
        i += brace.length;
        continue;
      }
      case '[': {
        const std::size_t start = i;
        ++i;
        if (i < p.size() && p[i] == '^') ++i;
        bool closed = false;
        int previous = -1;  // last plain character, for ranges
        while (i < p.size()) {
          if (p[i] == ']') {
            closed = true;
            ++i;
            break;
          }
          if (p[i] == '[' && i + 1 < p.size() && p[i + 1] == ':') {
            const auto end = p.find(":]", i + 2);
            if (end == std::string_view::npos) return RegexProblem{i, "unterminated character class name"};
            static constexpr std::string_view kClasses[] = {"alnum", "alpha", "blank", "cntrl", "digit", "graph",
                                                            "lower", "print", "punct", "space", "upper", "xdigit",
                                                            "d", "s", "w"};
            const std::string_view name = p.substr(i + 2, end - i - 2);
            bool known = false;
            for (auto k : kClasses) known = known || k == name;
            if (!known) return RegexProblem{i, "unknown character class"};
            i = end + 2;
            previous = -1;
            continue;
          }
          if (p[i] == '\\') {
            if (i + 1 >= p.size()) return RegexProblem{i, "trailing backslash"};
            const char e = p[i + 1];
            const bool class_escape = e == 'd' || e == 'D' || e == 's' || e == 'S' || e == 'w' || e == 'W';
            if (class_escape && i + 2 < p.size() && p[i + 2] == '-' && i + 3 < p.size() && p[i + 3] != ']') {
              return RegexProblem{i, "character class escape cannot start a range"};
            }
            previous = class_escape ? -1 : static_cast<unsigned char>(e);
            i += 2;
            continue;
          }
          if (p[i] == '-' && previous >= 0 && i + 1 < p.size() && p[i + 1] != ']' && p[i + 1] != '\\' && p[i + 1] != '[') {
            if (static_cast<unsigned char>(p[i + 1]) < previous) {
              return RegexProblem{i, "character range out of order"};
            }
            previous = -1;
            i += 2;
            continue;
          }
          previous = static_cast<unsigned char>(p[i]);
          ++i;
        }
        if (!closed) return RegexProblem{start, "unterminated character class"};
        can_repeat = true;
        continue;
      }
      default:
        can_repeat = true;
        ++i;
        continue;
    }
  }
  if (!open.empty()) return RegexProblem{open.back(), "unclosed '('"};
  return std::nullopt;
}

}  // namespace codecarta::detail
