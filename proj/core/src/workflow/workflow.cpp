#include "agencid/workflow/workflow.hpp"

#include "agencid/workflow/package.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace agencid::workflow {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point since)
{
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count());
}

std::string vendor_pk_ref(const std::string& v) { return "keys/vendors/" + v + ".pk"; }
std::string vendor_msk_ref(const std::string& v) { return "keys/vendors/" + v + ".msk"; }
std::string board_key_ref(const std::string& b) { return "keys/boards/" + b + ".dk"; }
std::string aggregate_ref(const std::string& c, const std::string& v) { return "keys/clusters/" + c + "/" + v + ".agk"; }

Bytes read_all(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_failure, "cannot read " + p.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

[[noreturn]] void reject_package(const std::string& why)
{
    throw Error(ErrorCode::authentication_failure, "package rejected: " + why);
}

}  // namespace

void validate_id(std::string_view id, std::string_view what)
{
    const bool ok_chars = std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '_'
               || c == '-';
    });
    if (id.empty() || id.size() > 128 || !ok_chars || id == "." || id == "..") {
        throw Error(ErrorCode::invalid_argument,
                    std::string(what) + " id '" + std::string(id) + "' must be 1-128 characters of [A-Za-z0-9._-]");
    }
}

int detect_scenario(std::size_t vendors, std::size_t families) noexcept
{
    if (vendors > 1) return 3;
    return families > 1 ? 2 : 1;
}

Workflow::Workflow(Registry& registry, Rng& rng, std::string passphrase, std::uint32_t kdf_iterations)
    : registry_(registry), rng_(rng), passphrase_(std::move(passphrase)), kdf_iterations_(kdf_iterations)
{
}

std::shared_ptr<const pairing::PairingEngine> Workflow::engine_for(const VendorRecord& vendor)
{
    const auto key = std::make_pair(vendor.backend, vendor.oracle_modulus);
    auto it = engines_.find(key);
    if (it == engines_.end()) it = engines_.emplace(key, pairing::make_engine(vendor.engine_config())).first;
    return it->second;
}

const kac::PublicKey& Workflow::public_key(const std::string& vendor_id)
{
    const auto& vendor = registry_.state().vendor(vendor_id);
    auto it = public_keys_.find(vendor_id);
    if (it != public_keys_.end() && it->second.first == vendor.public_key_sha256) return it->second.second;
    auto bytes = read_verified(vendor_pk_ref(vendor_id), vendor.public_key_sha256);
    auto engine = engine_for(vendor);
    auto pk = kac::deserialize_public_key(*engine, bytes);
    if (pk.params.capacity() != vendor.capacity) {
        throw Error(ErrorCode::integrity_failure, "public key capacity differs from the vendor record");
    }
    public_keys_.insert_or_assign(vendor_id, std::make_pair(vendor.public_key_sha256, std::move(pk)));
    return public_keys_.at(vendor_id).second;
}

Bytes Workflow::read_verified(const std::string& ref, const std::string& sha256_hex_expected) const
{
    auto bytes = read_all(registry_.resolve(ref));
    if (sha256_hex(bytes) != sha256_hex_expected) {
        throw Error(ErrorCode::integrity_failure, ref + " does not match the digest recorded in the registry");
    }
    return bytes;
}

void Workflow::write_file(const std::string& ref, ByteView bytes) const
{
    const auto path = registry_.resolve(ref);
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(ErrorCode::io_failure, "cannot write " + tmp);
    }
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::io_failure, "cannot write " + path.string() + ": " + ec.message());
}

kac::MasterSecretKey Workflow::load_master_key(const VendorRecord& vendor)
{
    auto sealed = read_verified(vendor_msk_ref(vendor.vendor_id), vendor.master_key_sha256);
    auto plain = open_with_passphrase(passphrase_, sealed, "vendor:" + vendor.vendor_id);
    return kac::deserialize_master_key(*engine_for(vendor), plain, vendor.capacity);
}

kac::AggregateKey Workflow::load_aggregate_key(const VendorRecord& vendor, const SubCluster& member)
{
    auto bytes = read_verified(member.aggregate_key_ref, member.aggregate_key_sha256);
    return kac::deserialize_aggregate_key(*engine_for(vendor), bytes, vendor.capacity, member.indices);
}

VendorRecord Workflow::vendor_init(const std::string& vendor_id, std::uint32_t capacity,
                                   const pairing::EngineConfig& config)
{
    validate_id(vendor_id, "vendor");
    if (capacity == 0) throw Error(ErrorCode::invalid_capacity, "capacity must be at least 1");
    if (config.backend == pairing::BackendId::ieid) {
        throw Error(ErrorCode::invalid_argument, "vendors need a pairing backend");
    }
    registry_.refresh();
    if (registry_.state().vendors.contains(vendor_id)) {
        throw Error(ErrorCode::duplicate, "vendor '" + vendor_id + "' already initialized");
    }

    VendorRecord record;
    record.vendor_id = vendor_id;
    record.capacity = capacity;
    record.backend = config.backend;
    record.oracle_modulus = config.backend == pairing::BackendId::symbolic ? config.oracle_modulus : 0;
    auto engine = engine_for(record);

    auto params = kac::setup(*engine, capacity, rng_);
    const kac::MasterSecretKey msk{engine->scalars().random_nonzero(rng_)};
    const kac::PublicKey pk{params, engine->scalar_mul(msk.gamma, params.generator())};
    const auto pk_bytes = kac::serialize(*engine, pk);
    auto msk_plain = kac::serialize(*engine, msk, capacity);
    const auto msk_sealed = seal_with_passphrase(passphrase_, msk_plain, "vendor:" + vendor_id, rng_, kdf_iterations_);
    std::fill(msk_plain.begin(), msk_plain.end(), 0);
    record.public_key_sha256 = sha256_hex(pk_bytes);
    record.master_key_sha256 = sha256_hex(msk_sealed);

    registry_.commit([&](const RegistryState& state) -> std::vector<Event> {
        if (state.vendors.contains(vendor_id)) {
            throw Error(ErrorCode::duplicate, "vendor '" + vendor_id + "' already initialized");
        }
        write_file(vendor_pk_ref(vendor_id), pk_bytes);
        write_file(vendor_msk_ref(vendor_id), msk_sealed);
        return {VendorInitialized{record}};
    });
    return record;
}

BoardRecord Workflow::register_board(const std::string& vendor_id, const std::string& board_id,
                                     const std::string& family)
{
    validate_id(board_id, "board");
    validate_id(family, "family");
    BoardRecord record;
    registry_.commit([&](const RegistryState& state) -> std::vector<Event> {
        const auto& vendor = state.vendor(vendor_id);
        if (auto it = state.boards.find(board_id); it != state.boards.end() && it->second.status == BoardStatus::active) {
            throw Error(ErrorCode::duplicate, "board '" + board_id + "' already registered");
        }
        auto index = state.lowest_free_index(vendor_id);
        if (!index) {
            throw Error(ErrorCode::registration_refused,
                        "vendor '" + vendor_id + "' has no free index (capacity " + std::to_string(vendor.capacity)
                            + ")");
        }
        auto engine = engine_for(vendor);
        const auto msk = load_master_key(vendor);
        const auto& pk = public_key(vendor_id);
        const auto key = kac::derive_board_key(*engine, pk.params, msk, *index);
        auto plain = kac::serialize(*engine, key, vendor.capacity);
        const auto sealed = seal_with_passphrase(passphrase_, plain, "board:" + board_id, rng_, kdf_iterations_);
        std::fill(plain.begin(), plain.end(), 0);

        record = BoardRecord{board_id, vendor_id, *index, family, BoardStatus::active, board_key_ref(board_id),
                             sha256_hex(sealed)};
        write_file(record.private_key_ref, sealed);
        return {BoardRegistered{record}};
    });
    return record;
}

void Workflow::deregister_board(const std::string& board_id)
{
    std::string key_ref;
    registry_.commit([&](const RegistryState& state) -> std::vector<Event> {
        const auto& board = state.board(board_id);
        if (board.status != BoardStatus::active) {
            throw Error(ErrorCode::key_unavailable, "board '" + board_id + "' is already deregistered");
        }
        key_ref = board.private_key_ref;
        return {BoardDeregistered{board_id}};
    });
    std::error_code ec;
    fs::remove(registry_.resolve(key_ref), ec);
}

ClusterSpec Workflow::form_cluster(const std::string& cluster_id, const std::vector<std::string>& board_ids,
                                   std::optional<int> scenario_hint)
{
    validate_id(cluster_id, "cluster");
    if (board_ids.empty()) throw Error(ErrorCode::empty_cluster, "a cluster needs at least one board");
    if (scenario_hint && (*scenario_hint < 1 || *scenario_hint > 3)) {
        throw Error(ErrorCode::invalid_argument, "scenario must be 1, 2 or 3");
    }

    registry_.refresh();
    const auto state = registry_.state();
    if (state.clusters.contains(cluster_id)) {
        throw Error(ErrorCode::duplicate, "cluster '" + cluster_id + "' already formed");
    }

    std::map<std::string, std::vector<std::uint32_t>> indices;
    std::map<std::string, std::set<std::string>> vendor_families;
    std::set<std::string> families;
    std::set<std::string> seen;
    for (const auto& id : board_ids) {
        if (!seen.insert(id).second) throw Error(ErrorCode::invalid_argument, "board '" + id + "' listed twice");
        const auto& board = state.board(id);
        if (board.status != BoardStatus::active) {
            throw Error(ErrorCode::inactive_index, "board '" + id + "' is deregistered");
        }
        indices[board.vendor].push_back(board.index);
        vendor_families[board.vendor].insert(board.family);
        families.insert(board.family);
    }

    ClusterSpec spec;
    spec.cluster_id = cluster_id;
    spec.scenario = detect_scenario(indices.size(), families.size());
    spec.families.assign(families.begin(), families.end());
    spec.board_ids = board_ids;
    std::sort(spec.board_ids.begin(), spec.board_ids.end());
    if (scenario_hint && *scenario_hint != spec.scenario) {
        throw Error(ErrorCode::scenario_violation,
                    "cluster '" + cluster_id + "' is scenario " + std::to_string(spec.scenario) + " ("
                        + std::to_string(indices.size()) + " vendor(s), " + std::to_string(families.size())
                        + " family/families), not scenario " + std::to_string(*scenario_hint));
    }

    std::vector<std::pair<std::string, Bytes>> files;
    for (const auto& [vendor_id, idx] : indices) {
        const auto& vendor = state.vendor(vendor_id);
        auto engine = engine_for(vendor);
        const auto set = kac::IndexSet::from(idx);
        const auto agg = kac::extract(*engine, public_key(vendor_id).params, set);
        auto bytes = kac::serialize(*engine, agg, vendor.capacity);
        SubCluster member;
        member.vendor = vendor_id;
        member.indices = set;
        member.families.assign(vendor_families[vendor_id].begin(), vendor_families[vendor_id].end());
        member.aggregate_key_ref = aggregate_ref(cluster_id, vendor_id);
        member.aggregate_key_sha256 = sha256_hex(bytes);
        spec.members.push_back(std::move(member));
        files.emplace_back(aggregate_ref(cluster_id, vendor_id), std::move(bytes));
    }

    registry_.commit([&](const RegistryState& fresh) -> std::vector<Event> {
        for (const auto& id : spec.board_ids) {
            const auto& board = fresh.board(id);
            const auto* member = spec.member_for(board.vendor);
            if (board.status != BoardStatus::active || !member || !member->indices.contains(board.index)) {
                throw Error(ErrorCode::inactive_index, "board '" + id + "' changed while the cluster was formed");
            }
        }
        if (fresh.clusters.contains(cluster_id)) {
            throw Error(ErrorCode::duplicate, "cluster '" + cluster_id + "' already formed");
        }
        for (const auto& [ref, bytes] : files) write_file(ref, bytes);
        return {ClusterFormed{spec}};
    });
    return spec;
}

ClusterSpec Workflow::form_cluster(const std::string& cluster_id, const std::string& vendor_id,
                                   const kac::IndexSet& indices, std::optional<int> scenario_hint)
{
    registry_.refresh();
    const auto& state = registry_.state();
    const auto& vendor = state.vendor(vendor_id);
    std::vector<std::string> board_ids;
    for (auto i : indices) {
        if (i < 1 || i > vendor.capacity) {
            throw Error(ErrorCode::index_out_of_range, "index " + std::to_string(i) + " outside [1, "
                                                           + std::to_string(vendor.capacity) + "]");
        }
        const auto* board = state.active_board(vendor_id, i);
        if (!board) throw Error(ErrorCode::inactive_index, "index " + std::to_string(i) + " has no active board");
        board_ids.push_back(board->board_id);
    }
    return form_cluster(cluster_id, board_ids, scenario_hint);
}

EncryptionResult Workflow::ipp_encrypt(const std::string& cluster_id, const std::map<std::string, Bytes>& payloads,
                                       const std::string& package_id)
{
    validate_id(package_id, "package");
    registry_.refresh();
    const auto& cluster = registry_.state().cluster(cluster_id);
    for (const auto& [family, _] : payloads) {
        if (!family.empty()
            && std::find(cluster.families.begin(), cluster.families.end(), family) == cluster.families.end()) {
            throw Error(ErrorCode::invalid_argument,
                        "cluster '" + cluster_id + "' has no boards of family '" + family + "'");
        }
    }
    auto payload_for = [&](const std::string& family) -> const Bytes& {
        if (auto it = payloads.find(family); it != payloads.end()) return it->second;
        if (auto it = payloads.find(""); it != payloads.end()) return it->second;
        throw Error(ErrorCode::invalid_argument, "no payload for family '" + family + "'");
    };

    EncryptionResult result;
    const bool multi_vendor = cluster.members.size() > 1;
    for (const auto& member : cluster.members) {
        const auto& vendor = registry_.state().vendor(member.vendor);
        auto engine = engine_for(vendor);
        const auto& pk = public_key(member.vendor);
        const auto agg = load_aggregate_key(vendor, member);
        const auto header_cluster = multi_vendor ? cluster_id + "@" + member.vendor : cluster_id;

        auto t0 = Clock::now();
        const auto enc = hybrid::encapsulate(*engine, pk, member.indices, agg, rng_);
        ++result.tally.key_generations;
        ++result.tally.key_encryptions;
        const auto key_block = kac::serialize(*engine, enc.ciphertext, vendor.capacity);
        result.tally.key_ns += elapsed_ns(t0);

        for (const auto& family : member.families) {
            const auto& payload = payload_for(family);
            OutputPackage out;
            out.vendor = member.vendor;
            out.family = family;
            out.cluster_id = header_cluster;
            out.package_id = member.families.size() == 1 ? package_id : package_id + "/" + family;

            EncryptedPackage pkg;
            pkg.header.backend = vendor.backend;
            pkg.header.cluster_id = out.cluster_id;
            pkg.header.package_id = out.package_id;
            pkg.header.cluster = member.indices;
            pkg.key_block = key_block;
            const auto aad = pkg.header.encode();

            t0 = Clock::now();
            const auto key = hybrid::derive_key(*engine, enc.secret, hybrid::key_context(out.cluster_id, out.package_id));
            result.tally.key_ns += elapsed_ns(t0);

            t0 = Clock::now();
            pkg.sealed = hybrid::seal(key, payload, aad, rng_);
            result.tally.seal_ns += elapsed_ns(t0);
            ++result.tally.seals;
            result.tally.sealed_bytes += pkg.sealed.ciphertext.size();

            out.bytes = pkg.to_bytes();
            result.packages.push_back(std::move(out));
        }
    }
    return result;
}

DecryptOutcome Workflow::board_decrypt(const std::string& board_id, ByteView package_bytes)
{
    registry_.refresh();
    const auto& state = registry_.state();
    const auto& board = state.board(board_id);
    if (board.status != BoardStatus::active) {
        throw Error(ErrorCode::key_unavailable, "board '" + board_id + "' is deregistered; its key was erased");
    }

    EncryptedPackage pkg;
    try {
        pkg = EncryptedPackage::parse(package_bytes);
    } catch (const Error& e) {
        reject_package(std::string("malformed container (") + e.what() + ")");
    }

    // The header is checked against the registry before any key is touched;
    // every mismatch is a forgery, not a routing question.
    std::string cluster_name = pkg.header.cluster_id;
    std::optional<std::string> header_vendor;
    if (auto at = cluster_name.find('@'); at != std::string::npos) {
        header_vendor = cluster_name.substr(at + 1);
        cluster_name.resize(at);
    }
    auto cit = state.clusters.find(cluster_name);
    if (cit == state.clusters.end()) reject_package("unknown cluster '" + cluster_name + "'");
    const auto& cluster = cit->second;
    const SubCluster* member = nullptr;
    if (header_vendor) {
        if (cluster.members.size() < 2) reject_package("vendor suffix on a single-vendor cluster");
        member = cluster.member_for(*header_vendor);
    } else if (cluster.members.size() == 1) {
        member = &cluster.members.front();
    }
    if (!member) reject_package("header does not name a sub-cluster of '" + cluster_name + "'");
    if (!(pkg.header.cluster == member->indices)) reject_package("index set differs from the registry");
    const auto& vendor = state.vendor(member->vendor);
    if (pkg.header.backend != vendor.backend) reject_package("backend differs from the vendor keyspace");

    if (board.vendor != member->vendor) {
        return {std::nullopt, "board '" + board_id + "' belongs to vendor '" + board.vendor + "', package targets '"
                                  + member->vendor + "'"};
    }
    if (!member->indices.contains(board.index)) {
        return {std::nullopt, "board index " + std::to_string(board.index) + " not in " + member->indices.to_string()};
    }

    auto engine = engine_for(vendor);
    const auto& pk = public_key(vendor.vendor_id);
    Bytes plain_key;
    try {
        plain_key = open_with_passphrase(passphrase_, read_verified(board.private_key_ref, board.private_key_sha256),
                                         "board:" + board_id);
    } catch (const Error& e) {
        throw Error(ErrorCode::key_unavailable, std::string("board key cannot be opened: ") + e.what());
    }
    const auto key = kac::deserialize_board_key(*engine, plain_key, vendor.capacity);
    std::fill(plain_key.begin(), plain_key.end(), 0);
    if (key.index != board.index) throw Error(ErrorCode::key_mismatch, "board key is for another index");

    std::optional<hybrid::SessionSecret> secret;
    try {
        const auto ct = kac::deserialize_ciphertext(*engine, pkg.key_block, vendor.capacity, pkg.header.cluster);
        secret = hybrid::decapsulate(*engine, pk.params, pkg.header.cluster, board.index, key, ct);
    } catch (const Error& e) {
        reject_package(std::string("key ciphertext unreadable (") + e.what() + ")");
    }
    if (!secret) return {std::nullopt, "board index not in the ciphertext's cluster"};

    const auto sym = hybrid::derive_key(*engine, *secret,
                                        hybrid::key_context(pkg.header.cluster_id, pkg.header.package_id));
    return {hybrid::open(sym, pkg.sealed, pkg.header.encode()), "recovered"};
}

}  // namespace agencid::workflow
