#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace interop {

/// Opaque byte string. Ledger values, transaction arguments and topic
/// messages are all carried as raw bytes.
using Bytes = std::string;

std::string to_hex(std::string_view bytes);

std::string base64_encode(std::string_view bytes);

/// Strict decode: rejects anything that does not re-encode to the same text.
std::optional<Bytes> base64_decode(std::string_view text);

}  // namespace interop
