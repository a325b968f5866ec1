#pragma once

#include "agencid/bytes.hpp"
#include "agencid/kac/kac.hpp"
#include "agencid/rng.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace agencid::hybrid {

/// HKDF info prefix; the caller's context follows it.
inline constexpr std::string_view kdf_label = "AgEncID/v1/key";

inline constexpr std::size_t key_size = 32;
inline constexpr std::size_t nonce_size = 12;
inline constexpr std::size_t tag_size = 16;

/// Random G_T element encapsulated under the aggregate key. Stands in for
/// the bitstream key itself.
struct SessionSecret {
    kac::TargetElement gt;
};

/// AES-256 key. Wiped on destruction.
class SymmetricKey {
public:
    explicit SymmetricKey(const std::array<std::uint8_t, key_size>& bytes) : bytes_(bytes) {}
    SymmetricKey(const SymmetricKey&) = default;
    SymmetricKey& operator=(const SymmetricKey&) = default;
    ~SymmetricKey();

    [[nodiscard]] const std::array<std::uint8_t, key_size>& bytes() const noexcept { return bytes_; }

    friend bool operator==(const SymmetricKey&, const SymmetricKey&) = default;

private:
    std::array<std::uint8_t, key_size> bytes_;
};

/// AES-256-GCM output. Wire layout: 12-byte nonce, 4-byte big-endian
/// ciphertext length, ciphertext, 16-byte tag. `aad_digest` is SHA-256 of the
/// associated data and is what GCM authenticates; it is recomputed on open
/// and not part of the wire layout.
struct SealedPayload {
    std::array<std::uint8_t, nonce_size> nonce{};
    Bytes ciphertext;
    std::array<std::uint8_t, tag_size> tag{};
    Digest aad_digest{};

    [[nodiscard]] Bytes to_wire() const;
    void write(ByteWriter& w) const;
    [[nodiscard]] static SealedPayload read(ByteReader& r);
    [[nodiscard]] static SealedPayload from_wire(ByteView bytes);
    [[nodiscard]] std::size_t wire_size() const noexcept { return nonce_size + 4 + ciphertext.size() + tag_size; }
};

struct Encapsulation {
    SessionSecret secret;
    kac::KeyCiphertext ciphertext;
};

/// Samples a fresh session secret and encrypts it for `cluster`.
[[nodiscard]] Encapsulation encapsulate(const kac::PairingEngine& engine, const kac::PublicKey& pk,
                                        const kac::IndexSet& cluster, const kac::AggregateKey& agg, Rng& rng);

/// std::nullopt when `index` is not in `cluster`.
[[nodiscard]] std::optional<SessionSecret> decapsulate(const kac::PairingEngine& engine,
                                                       const kac::SystemParams& params, const kac::IndexSet& cluster,
                                                       std::uint32_t index, const kac::BoardPrivateKey& key,
                                                       const kac::KeyCiphertext& ct);

/// Unambiguous encoding of (cluster id, package id) for derive_key.
[[nodiscard]] Bytes key_context(std::string_view cluster_id, std::string_view package_id);

/// HKDF-SHA256: ikm = canonical encoding of the secret, empty salt,
/// info = kdf_label || context.
[[nodiscard]] SymmetricKey derive_key(const kac::PairingEngine& engine, const SessionSecret& secret, ByteView context);

/// Plain HKDF-SHA256 with `label` prefixed to info; shared with the baseline's
/// key wrapping.
[[nodiscard]] std::array<std::uint8_t, key_size> hkdf_sha256(ByteView ikm, ByteView salt, std::string_view label,
                                                             ByteView info);

[[nodiscard]] SealedPayload seal(const SymmetricKey& key, ByteView payload, ByteView aad, Rng& rng);

/// Throws ErrorCode::authentication_failure on a wrong key or any change to
/// nonce, ciphertext, tag or associated data.
[[nodiscard]] Bytes open(const SymmetricKey& key, const SealedPayload& sealed, ByteView aad);

}  // namespace agencid::hybrid
