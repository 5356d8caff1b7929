// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace codecarta::detail {

struct RegexProblem {
  std::size_t position = 0;
  std::string message;
};

// Syntax check for ECMAScript patterns. std::regex reports no offsets, so
// this runs first to point at the offending character.
std::optional<RegexProblem> check_regex(std::string_view pattern);

}  // namespace codecarta::detail
