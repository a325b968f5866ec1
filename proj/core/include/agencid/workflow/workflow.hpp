#pragma once

// Vendor, cloud provider, IP provider and board roles acting on a shared
// registry directory.
//
// Key files under the registry:
//   keys/vendors/<vendor>.pk              public key (plain)
//   keys/vendors/<vendor>.msk             master key, passphrase-sealed
//   keys/boards/<board>.dk                board key, passphrase-sealed
//   keys/clusters/<cluster>/<vendor>.agk  aggregate key (plain, digest in the journal)

#include "agencid/hybrid/hybrid.hpp"
#include "agencid/kac/kac.hpp"
#include "agencid/pairing/engine.hpp"
#include "agencid/rng.hpp"
#include "agencid/workflow/keystore.hpp"
#include "agencid/workflow/registry.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace agencid::workflow {

/// Ids are non-empty, at most 128 characters from [A-Za-z0-9._-], and not
/// "." or "..". Throws ErrorCode::invalid_argument.
void validate_id(std::string_view id, std::string_view what);

/// 1 for one vendor and one family, 2 for one vendor and several families,
/// 3 for several vendors.
[[nodiscard]] int detect_scenario(std::size_t vendors, std::size_t families) noexcept;

struct EncryptionTally {
    /// Session secrets drawn (one per vendor sub-cluster).
    std::uint64_t key_generations = 0;
    /// KAC encryptions (one per vendor sub-cluster).
    std::uint64_t key_encryptions = 0;
    /// Payload seals (one per family within each sub-cluster).
    std::uint64_t seals = 0;
    std::uint64_t sealed_bytes = 0;
    std::uint64_t key_ns = 0;
    std::uint64_t seal_ns = 0;
};

struct OutputPackage {
    std::string vendor;
    std::string family;
    std::string cluster_id;
    std::string package_id;
    Bytes bytes;
};

struct EncryptionResult {
    std::vector<OutputPackage> packages;
    EncryptionTally tally;
};

/// Either the recovered payload or a rejection: the board is outside the
/// package's cluster. Tampering and key problems are errors, not outcomes.
struct DecryptOutcome {
    std::optional<Bytes> payload;
    std::string reason;

    [[nodiscard]] bool recovered() const noexcept { return payload.has_value(); }
};

class Workflow {
public:
    Workflow(Registry& registry, Rng& rng, std::string passphrase,
             std::uint32_t kdf_iterations = default_kdf_iterations);

    // Vendor role.

    /// Setup and keygen for `capacity` boards. Throws ErrorCode::duplicate or
    /// ErrorCode::invalid_capacity.
    VendorRecord vendor_init(const std::string& vendor_id, std::uint32_t capacity,
                             const pairing::EngineConfig& config);

    /// Assigns the lowest index without an active board and seals d_i for
    /// the board. Throws ErrorCode::registration_refused when every index
    /// is taken.
    BoardRecord register_board(const std::string& vendor_id, const std::string& board_id, const std::string& family);

    /// Marks the board deregistered, frees its index and erases its key file.
    void deregister_board(const std::string& board_id);

    /// One aggregate key per vendor among the boards. Throws
    /// ErrorCode::inactive_index for deregistered boards and
    /// ErrorCode::scenario_violation when `scenario_hint` disagrees with the
    /// detected scenario.
    ClusterSpec form_cluster(const std::string& cluster_id, const std::vector<std::string>& board_ids,
                             std::optional<int> scenario_hint = std::nullopt);
    /// Same, naming boards by index in one vendor keyspace.
    ClusterSpec form_cluster(const std::string& cluster_id, const std::string& vendor_id,
                             const kac::IndexSet& indices, std::optional<int> scenario_hint = std::nullopt);

    // IP provider role.

    /// One KAC encryption per vendor sub-cluster and one seal per family.
    /// `payloads` maps family to payload; the "" entry covers families not
    /// listed. Header cluster id is `cluster_id`, or `cluster_id@vendor`
    /// when the cluster spans vendors; package id is `package_id`, or
    /// `package_id/family` when a sub-cluster has several families.
    /// Throws ErrorCode::integrity_failure if a key file fails its digest.
    EncryptionResult ipp_encrypt(const std::string& cluster_id, const std::map<std::string, Bytes>& payloads,
                                 const std::string& package_id);

    // Board role.

    /// Throws ErrorCode::not_found for an unknown board,
    /// ErrorCode::key_unavailable for a deregistered one and
    /// ErrorCode::authentication_failure for any package that does not
    /// verify against the registry and its AEAD tag.
    DecryptOutcome board_decrypt(const std::string& board_id, ByteView package_bytes);

    // Shared lookups; results are cached per file digest.

    [[nodiscard]] std::shared_ptr<const pairing::PairingEngine> engine_for(const VendorRecord& vendor);
    [[nodiscard]] const kac::PublicKey& public_key(const std::string& vendor_id);
    [[nodiscard]] Registry& registry() noexcept { return registry_; }

private:
    [[nodiscard]] kac::MasterSecretKey load_master_key(const VendorRecord& vendor);
    [[nodiscard]] kac::AggregateKey load_aggregate_key(const VendorRecord& vendor, const SubCluster& member);
    [[nodiscard]] Bytes read_verified(const std::string& ref, const std::string& sha256_hex) const;
    void write_file(const std::string& ref, ByteView bytes) const;

    Registry& registry_;
    Rng& rng_;
    std::string passphrase_;
    std::uint32_t kdf_iterations_;
    std::map<std::pair<pairing::BackendId, std::uint64_t>, std::shared_ptr<const pairing::PairingEngine>> engines_;
    std::map<std::string, std::pair<std::string, kac::PublicKey>> public_keys_;
};

}  // namespace agencid::workflow
