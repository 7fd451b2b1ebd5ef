#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace interop {

using Json = nlohmann::json;

/// Sorted keys, no insignificant whitespace, strict UTF-8. Two equal values
/// always serialize to the same bytes.
std::string canonical(const Json& value);

/// Parses `text` and returns it only if it is a JSON object.
std::optional<Json> parse_object(std::string_view text);

}  // namespace interop
