#pragma once

// Individual-encryption baseline: every board in the cluster gets its own
// symmetric key, its own sealed copy of the payload and its own wrapped key.
// Packages share the AGID container with backend id BackendId::ieid and a
// singleton index set naming the recipient.

#include "agencid/hybrid/hybrid.hpp"
#include "agencid/kac/kac.hpp"
#include "agencid/rng.hpp"
#include "agencid/workflow/package.hpp"

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace agencid::ieid {

struct BoardPublicKey {
    std::uint32_t index = 0;
    std::array<std::uint8_t, 32> public_key{};
};

struct IeidKeyPair {
    std::uint32_t index = 0;
    std::array<std::uint8_t, 32> private_key{};
    std::array<std::uint8_t, 32> public_key{};

    [[nodiscard]] BoardPublicKey public_part() const { return {index, public_key}; }
};

/// Asymmetric key-wrapping primitive used by the baseline.
class KeyWrapper {
public:
    virtual ~KeyWrapper() = default;

    [[nodiscard]] virtual std::string_view name() const noexcept = 0;
    [[nodiscard]] virtual IeidKeyPair generate(std::uint32_t index, Rng& rng) const = 0;
    [[nodiscard]] virtual Bytes wrap(const BoardPublicKey& recipient, const hybrid::SymmetricKey& key,
                                     ByteView context, Rng& rng) const = 0;
    /// Throws ErrorCode::authentication_failure when the wrapped key was not
    /// produced for this board and context.
    [[nodiscard]] virtual hybrid::SymmetricKey unwrap(const IeidKeyPair& recipient, ByteView wrapped,
                                                      ByteView context) const = 0;
};

/// ECIES-style wrap: ephemeral X25519 agreement, HKDF-SHA256, AES-256-GCM.
/// Wrapped layout: 32-byte ephemeral public key || 12-byte nonce ||
/// 4-byte length || 32-byte encrypted key || 16-byte tag.
class X25519Wrapper final : public KeyWrapper {
public:
    [[nodiscard]] std::string_view name() const noexcept override { return "x25519-hkdf-aes256gcm"; }
    [[nodiscard]] IeidKeyPair generate(std::uint32_t index, Rng& rng) const override;
    [[nodiscard]] Bytes wrap(const BoardPublicKey& recipient, const hybrid::SymmetricKey& key, ByteView context,
                             Rng& rng) const override;
    [[nodiscard]] hybrid::SymmetricKey unwrap(const IeidKeyPair& recipient, ByteView wrapped,
                                              ByteView context) const override;
};

struct IeidTally {
    std::uint64_t key_generations = 0;
    std::uint64_t seals = 0;
    std::uint64_t wraps = 0;
    /// Wall time spent on key generation plus wrapping, and on sealing.
    std::uint64_t key_ns = 0;
    std::uint64_t seal_ns = 0;
};

struct IeidBatch {
    std::vector<workflow::EncryptedPackage> packages;
    IeidTally tally;
};

/// One package per board in `boards`. Throws ErrorCode::empty_cluster for
/// an empty list and ErrorCode::invalid_argument for repeated indices.
[[nodiscard]] IeidBatch encrypt_all(const KeyWrapper& wrapper, std::span<const BoardPublicKey> boards,
                                    ByteView payload, std::string_view cluster_id, std::string_view package_id,
                                    Rng& rng);

/// Throws ErrorCode::key_mismatch if the package names another board and
/// ErrorCode::authentication_failure on tampering.
[[nodiscard]] Bytes decrypt(const KeyWrapper& wrapper, const IeidKeyPair& board,
                            const workflow::EncryptedPackage& package);

}  // namespace agencid::ieid
