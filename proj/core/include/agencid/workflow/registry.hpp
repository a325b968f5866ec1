#pragma once

#include "agencid/kac/kac.hpp"
#include "agencid/pairing/engine.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace agencid::workflow {

enum class BoardStatus { active, deregistered };

struct VendorRecord {
    std::string vendor_id;
    std::uint32_t capacity = 0;
    pairing::BackendId backend = pairing::BackendId::type_a;
    std::uint64_t oracle_modulus = 0;
    std::string public_key_sha256;
    std::string master_key_sha256;

    [[nodiscard]] pairing::EngineConfig engine_config() const;

    friend bool operator==(const VendorRecord&, const VendorRecord&) = default;
};

struct BoardRecord {
    std::string board_id;
    std::string vendor;
    std::uint32_t index = 0;
    std::string family;
    BoardStatus status = BoardStatus::active;
    std::string private_key_ref;
    std::string private_key_sha256;

    friend bool operator==(const BoardRecord&, const BoardRecord&) = default;
};

/// The part of a cluster that belongs to one vendor keyspace, with its own
/// aggregate key.
struct SubCluster {
    std::string vendor;
    kac::IndexSet indices;
    std::vector<std::string> families;
    std::string aggregate_key_ref;
    std::string aggregate_key_sha256;

    friend bool operator==(const SubCluster&, const SubCluster&) = default;
};

struct ClusterSpec {
    std::string cluster_id;
    int scenario = 1;
    std::vector<std::string> families;
    std::vector<std::string> board_ids;
    std::vector<SubCluster> members;

    [[nodiscard]] const SubCluster* member_for(std::string_view vendor) const noexcept;

    friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

struct VendorInitialized {
    VendorRecord vendor;
};
struct BoardRegistered {
    BoardRecord board;
};
struct BoardDeregistered {
    std::string board_id;
};
struct ClusterFormed {
    ClusterSpec cluster;
};

using Event = std::variant<VendorInitialized, BoardRegistered, BoardDeregistered, ClusterFormed>;

/// Registry contents. A pure value: apply() folds one journal event in.
struct RegistryState {
    std::map<std::string, VendorRecord> vendors;
    std::map<std::string, BoardRecord> boards;
    std::map<std::string, ClusterSpec> clusters;
    std::uint64_t sequence = 0;

    /// Validates the event against the current state; throws on conflict
    /// (duplicate ids, occupied index, unknown board).
    void apply(const Event& event);

    [[nodiscard]] const VendorRecord& vendor(std::string_view id) const;
    [[nodiscard]] const BoardRecord& board(std::string_view id) const;
    [[nodiscard]] const ClusterSpec& cluster(std::string_view id) const;

    /// Active board holding `index` in the vendor keyspace, if any.
    [[nodiscard]] const BoardRecord* active_board(std::string_view vendor, std::uint32_t index) const;
    /// Lowest index in [1, capacity] not held by an active board.
    [[nodiscard]] std::optional<std::uint32_t> lowest_free_index(std::string_view vendor) const;

    /// Canonical JSON text; equal states have equal text.
    [[nodiscard]] std::string canonical_json() const;
    [[nodiscard]] static RegistryState from_json(std::string_view text);
    /// SHA-256 of canonical_json(), hex.
    [[nodiscard]] std::string digest() const;

    friend bool operator==(const RegistryState&, const RegistryState&) = default;
};

[[nodiscard]] std::string event_to_json(const Event& event, std::uint64_t sequence);
[[nodiscard]] std::pair<Event, std::uint64_t> event_from_json(std::string_view text);

/// Directory-backed registry: `journal.log` holds one checksummed JSON event
/// per line, `snapshot.json` the folded state after the last commit, and
/// `keys/` the key files the records point to. Writers serialize through an
/// exclusive advisory lock on the journal.
class Registry {
public:
    /// Creates the directory if needed, replays the journal and checks the
    /// snapshot against it. Throws ErrorCode::journal_corruption or
    /// ErrorCode::integrity_failure.
    [[nodiscard]] static Registry open(const std::filesystem::path& dir);

    /// Folds a journal file. Every line is `<16 hex checksum> <json>`; the
    /// checksum is the first 8 bytes of SHA-256 of the JSON text. A missing
    /// file is an empty journal.
    [[nodiscard]] static RegistryState replay(const std::filesystem::path& journal);
    [[nodiscard]] static RegistryState load_snapshot(const std::filesystem::path& snapshot);

    [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }
    [[nodiscard]] std::filesystem::path journal_path() const { return dir_ / "journal.log"; }
    [[nodiscard]] std::filesystem::path snapshot_path() const { return dir_ / "snapshot.json"; }
    [[nodiscard]] const RegistryState& state() const noexcept { return state_; }

    using Planner = std::function<std::vector<Event>(const RegistryState&)>;

    /// Under the journal lock: reloads the journal, asks `plan` for events
    /// against the fresh state, validates and appends them, then rewrites the
    /// snapshot. Nothing is appended if `plan` or validation throws.
    void commit(const Planner& plan);

    /// Re-reads the journal without locking.
    void refresh();

    [[nodiscard]] std::filesystem::path resolve(const std::string& ref) const { return dir_ / ref; }

private:
    explicit Registry(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write_snapshot() const;

    std::filesystem::path dir_;
    RegistryState state_;
};

}  // namespace agencid::workflow
