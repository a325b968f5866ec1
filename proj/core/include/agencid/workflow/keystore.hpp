#pragma once

#include "agencid/bytes.hpp"
#include "agencid/rng.hpp"

#include <cstdint>
#include <string_view>

namespace agencid::workflow {

inline constexpr std::uint32_t default_kdf_iterations = 20000;

/// Seals key material at rest under a passphrase: "AGSK", version 0x01,
/// 16-byte salt, 4-byte PBKDF2-HMAC-SHA256 iteration count, then a sealed
/// payload. `label` (for example "board:b1") is bound as associated data so a
/// file cannot be swapped for another record's file.
[[nodiscard]] Bytes seal_with_passphrase(std::string_view passphrase, ByteView secret, std::string_view label,
                                         Rng& rng, std::uint32_t iterations = default_kdf_iterations);

/// Throws ErrorCode::authentication_failure for a wrong passphrase, a wrong
/// label or a damaged file.
[[nodiscard]] Bytes open_with_passphrase(std::string_view passphrase, ByteView sealed, std::string_view label);

}  // namespace agencid::workflow
