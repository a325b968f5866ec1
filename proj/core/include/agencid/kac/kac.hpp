#pragma once

// Key aggregation with aggregate encryption and individual decryption.
//
// A vendor runs setup/keygen once for capacity n boards. For a cluster S of
// board indices, extract() yields one constant-size aggregate key K_S; a
// message in G_T encrypted under K_S is a constant-size triple (c1, c2, c3)
// that any board i in S opens with its own key d_i alone:
//
//   g_i  = alpha^i g             for i in {1..n, n+2..2n}   (g_{n+1} never exists)
//   v    = gamma g,  d_i = gamma g_i
//   K_S  = sum_{j in S} g_{n+1-j}
//   C    = (t g,  t (v + K_S),  m * e(g_n, g_1)^t)
//   m    = c3 * e(d_i + b_{i,S}, c1) / e(g_i, c2),   b_{i,S} = sum_{j in S, j != i} g_{n+1-j+i}
//
// Elements consumed on the right of the pairing (g in c1, v and K_S in c2)
// carry the second-group tag.

#include "agencid/bytes.hpp"
#include "agencid/pairing/engine.hpp"
#include "agencid/rng.hpp"

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace agencid::kac {

using pairing::BackendId;
using pairing::PairingEngine;
using pairing::Scalar;
using pairing::SourceElement;
using pairing::TargetElement;

/// Sorted set of distinct board indices.
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::initializer_list<std::uint32_t> indices);

    /// Sorts; throws ErrorCode::invalid_argument on duplicates.
    [[nodiscard]] static IndexSet from(std::vector<std::uint32_t> indices);
    /// Parses "1,3,4". Throws on malformed input or duplicates.
    [[nodiscard]] static IndexSet parse(std::string_view text);

    [[nodiscard]] bool contains(std::uint32_t i) const noexcept;
    [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] const std::vector<std::uint32_t>& values() const noexcept { return indices_; }
    [[nodiscard]] auto begin() const noexcept { return indices_.begin(); }
    [[nodiscard]] auto end() const noexcept { return indices_.end(); }
    [[nodiscard]] std::string to_string() const;

    /// 4-byte count followed by the sorted 4-byte indices.
    void write(ByteWriter& w) const;
    /// Rejects unsorted or repeated indices.
    [[nodiscard]] static IndexSet read(ByteReader& r);

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<std::uint32_t> indices_;
};

/// Public parameters {g, g_1..g_n, g_{n+2}..g_2n} plus the precomputed
/// e(g_n, g_1) that makes encryption pairing-free.
class SystemParams {
public:
    /// `stored` lists g_1..g_n then g_{n+2}..g_{2n} (2n - 1 first-group
    /// elements). Computes the precomputed base with one pairing.
    [[nodiscard]] static SystemParams from_elements(const PairingEngine& engine, std::uint32_t n, SourceElement g,
                                                    std::vector<SourceElement> stored);

    [[nodiscard]] std::uint32_t capacity() const noexcept { return n_; }
    [[nodiscard]] BackendId backend() const noexcept { return backend_; }
    [[nodiscard]] const SourceElement& generator() const noexcept { return g_; }
    [[nodiscard]] bool has_element(std::uint32_t i) const noexcept;
    /// g_i; throws ErrorCode::index_out_of_range for i = 0, i = n+1 or i > 2n.
    [[nodiscard]] const SourceElement& element(std::uint32_t i) const;
    [[nodiscard]] std::vector<std::uint32_t> stored_indices() const;
    [[nodiscard]] const std::vector<SourceElement>& stored_elements() const noexcept { return stored_; }
    [[nodiscard]] const TargetElement& precomputed_base() const noexcept { return base_; }

    /// Throws ErrorCode::backend_mismatch unless `engine` produced these params.
    void require_engine(const PairingEngine& engine) const;

private:
    SystemParams(std::uint32_t n, BackendId backend, std::uint64_t variant, SourceElement g,
                 std::vector<SourceElement> stored, TargetElement base)
        : n_(n), backend_(backend), variant_(variant), g_(std::move(g)), stored_(std::move(stored)), base_(std::move(base))
    {
    }

    std::uint32_t n_;
    BackendId backend_;
    std::uint64_t variant_;
    SourceElement g_;
    std::vector<SourceElement> stored_;
    TargetElement base_;
};

struct MasterSecretKey {
    Scalar gamma;
};

struct PublicKey {
    SystemParams params;
    SourceElement v;
};

struct BoardPrivateKey {
    std::uint32_t index;
    SourceElement d;
};

struct AggregateKey {
    IndexSet cluster;
    SourceElement k;
};

struct KeyCiphertext {
    SourceElement c1;
    SourceElement c2;
    TargetElement c3;
    IndexSet cluster;
};

struct KeyMaterial {
    PublicKey pk;
    MasterSecretKey msk;
    std::vector<BoardPrivateKey> board_keys;
};

/// Draws alpha, computes the parameters and forgets alpha.
/// Throws ErrorCode::invalid_capacity for n = 0.
[[nodiscard]] SystemParams setup(const PairingEngine& engine, std::uint32_t n, Rng& rng);

/// Draws gamma and derives PK and the n board keys.
[[nodiscard]] KeyMaterial keygen(const PairingEngine& engine, const SystemParams& params, Rng& rng);
[[nodiscard]] KeyMaterial keygen(const PairingEngine& engine, const SystemParams& params, const MasterSecretKey& msk);

/// d_i = gamma g_i for one board, as done by the vendor at enrollment.
[[nodiscard]] BoardPrivateKey derive_board_key(const PairingEngine& engine, const SystemParams& params,
                                               const MasterSecretKey& msk, std::uint32_t index);

/// K_S. Throws ErrorCode::empty_cluster or ErrorCode::index_out_of_range.
[[nodiscard]] AggregateKey extract(const PairingEngine& engine, const SystemParams& params, const IndexSet& cluster);

/// Pairing-free encryption of m for `cluster`. Throws
/// ErrorCode::cluster_mismatch if `agg` was extracted for another set.
[[nodiscard]] KeyCiphertext encrypt(const PairingEngine& engine, const PublicKey& pk, const IndexSet& cluster,
                                    const AggregateKey& agg, const TargetElement& m, Rng& rng);

/// Recovers m with exactly two pairings, or std::nullopt when the board is
/// not in `cluster`. Throws ErrorCode::key_mismatch if key.index != index.
[[nodiscard]] std::optional<TargetElement> decrypt(const PairingEngine& engine, const SystemParams& params,
                                                   const IndexSet& cluster, std::uint32_t index,
                                                   const BoardPrivateKey& key, const KeyCiphertext& ct);

// Canonical encodings: 4-byte magic, version 0x01, backend id byte, 4-byte
// capacity n, then 4-byte length-prefixed element payloads. Aggregate keys
// and ciphertexts omit their index set, which travels in the enclosing
// container; their length is therefore independent of |S|.

inline constexpr std::uint8_t encoding_version = 0x01;

[[nodiscard]] Bytes serialize(const PairingEngine& engine, const PublicKey& pk);
[[nodiscard]] PublicKey deserialize_public_key(const PairingEngine& engine, ByteView bytes);

[[nodiscard]] Bytes serialize(const PairingEngine& engine, const MasterSecretKey& msk, std::uint32_t capacity);
[[nodiscard]] MasterSecretKey deserialize_master_key(const PairingEngine& engine, ByteView bytes,
                                                     std::uint32_t capacity);

[[nodiscard]] Bytes serialize(const PairingEngine& engine, const BoardPrivateKey& key, std::uint32_t capacity);
[[nodiscard]] BoardPrivateKey deserialize_board_key(const PairingEngine& engine, ByteView bytes,
                                                    std::uint32_t capacity);

[[nodiscard]] Bytes serialize(const PairingEngine& engine, const AggregateKey& agg, std::uint32_t capacity);
[[nodiscard]] AggregateKey deserialize_aggregate_key(const PairingEngine& engine, ByteView bytes,
                                                     std::uint32_t capacity, IndexSet cluster);

[[nodiscard]] Bytes serialize(const PairingEngine& engine, const KeyCiphertext& ct, std::uint32_t capacity);
[[nodiscard]] KeyCiphertext deserialize_ciphertext(const PairingEngine& engine, ByteView bytes,
                                                   std::uint32_t capacity, IndexSet cluster);

}  // namespace agencid::kac
