#pragma once

#include "agencid/bytes.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace agencid {

/// Byte source for all randomized operations.
///
/// A seeded instance is a deterministic SHA-256 counter-mode stream, so a
/// given seed yields bit-identical keys, ciphertexts and packages across
/// runs and platforms. An unseeded instance draws from the OpenSSL system
/// DRBG. Instances are move-only and meant to be owned by one thread.
class Rng {
public:
    [[nodiscard]] static Rng seeded(std::uint64_t seed);
    [[nodiscard]] static Rng system();
    [[nodiscard]] static Rng from_optional_seed(std::optional<std::uint64_t> seed)
    {
        return seed ? seeded(*seed) : system();
    }

    Rng(Rng&&) noexcept = default;
    Rng& operator=(Rng&&) noexcept = default;
    Rng(const Rng&) = delete;
    Rng& operator=(const Rng&) = delete;

    void fill(std::span<std::uint8_t> out);
    [[nodiscard]] Bytes bytes(std::size_t n);
    [[nodiscard]] std::uint64_t next_u64();

    [[nodiscard]] bool deterministic() const noexcept { return seed_.has_value(); }

private:
    explicit Rng(std::optional<std::uint64_t> seed) noexcept : seed_(seed) {}

    void refill();

    std::optional<std::uint64_t> seed_;
    std::uint64_t counter_ = 0;
    std::array<std::uint8_t, 32> block_{};
    std::size_t used_ = block_.size();
};

using Digest = std::array<std::uint8_t, 32>;

[[nodiscard]] Digest sha256(ByteView data);
[[nodiscard]] std::string sha256_hex(ByteView data);

}  // namespace agencid
