// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "codecarta/entity_model.hpp"

namespace codecarta {

/// Canonical interchange document for a valid graph: entities keyed by
/// dotted token text in token order, relations sorted by id and then by
/// (source, target). Throws Error(Validation) for an invalid graph.
std::string serialize(const EntityGraph& graph);

/// Parses an interchange document. Throws Error(Parse) with a byte offset
/// for malformed text, Error(Version) for any schema version other than
/// kSchemaVersion, and Error(Validation) with a document path for
/// structural violations.
EntityGraph deserialize(std::string_view document);

}  // namespace codecarta
