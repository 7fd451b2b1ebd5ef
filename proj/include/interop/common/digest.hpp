#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace interop {

using Digest = std::array<std::uint8_t, 32>;

inline constexpr std::string_view kDigestAlgorithm = "sha256";

Digest sha256(std::string_view data);

std::string to_hex(const Digest& digest);

inline constexpr Digest kZeroDigest{};

}  // namespace interop
