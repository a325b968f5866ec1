#include "agencid/workflow/registry.hpp"

#include "agencid/rng.hpp"

#include <json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace agencid::workflow {

using json = nlohmann::json;
namespace fs = std::filesystem;

// ---- JSON mapping ----------------------------------------------------------

namespace {

json to_json(const kac::IndexSet& s)
{
    return json(s.values());
}

kac::IndexSet index_set_from(const json& j)
{
    return kac::IndexSet::from(j.get<std::vector<std::uint32_t>>());
}

json to_json(const VendorRecord& v)
{
    return {{"vendor_id", v.vendor_id},
            {"capacity", v.capacity},
            {"backend", static_cast<int>(v.backend)},
            {"oracle_modulus", v.oracle_modulus},
            {"public_key_sha256", v.public_key_sha256},
            {"master_key_sha256", v.master_key_sha256}};
}

VendorRecord vendor_from(const json& j)
{
    VendorRecord v;
    v.vendor_id = j.at("vendor_id").get<std::string>();
    v.capacity = j.at("capacity").get<std::uint32_t>();
    v.backend = pairing::backend_from_byte(j.at("backend").get<std::uint8_t>());
    v.oracle_modulus = j.at("oracle_modulus").get<std::uint64_t>();
    v.public_key_sha256 = j.at("public_key_sha256").get<std::string>();
    v.master_key_sha256 = j.at("master_key_sha256").get<std::string>();
    return v;
}

json to_json(const BoardRecord& b)
{
    return {{"board_id", b.board_id},
            {"vendor", b.vendor},
            {"index", b.index},
            {"family", b.family},
            {"status", b.status == BoardStatus::active ? "active" : "deregistered"},
            {"private_key_ref", b.private_key_ref},
            {"private_key_sha256", b.private_key_sha256}};
}

BoardRecord board_from(const json& j)
{
    BoardRecord b;
    b.board_id = j.at("board_id").get<std::string>();
    b.vendor = j.at("vendor").get<std::string>();
    b.index = j.at("index").get<std::uint32_t>();
    b.family = j.at("family").get<std::string>();
    const auto status = j.at("status").get<std::string>();
    if (status != "active" && status != "deregistered") {
        throw Error(ErrorCode::invalid_encoding, "unknown board status '" + status + "'");
    }
    b.status = status == "active" ? BoardStatus::active : BoardStatus::deregistered;
    b.private_key_ref = j.at("private_key_ref").get<std::string>();
    b.private_key_sha256 = j.at("private_key_sha256").get<std::string>();
    return b;
}

json to_json(const ClusterSpec& c)
{
    json members = json::array();
    for (const auto& m : c.members) {
        members.push_back({{"vendor", m.vendor},
                           {"indices", to_json(m.indices)},
                           {"families", m.families},
                           {"aggregate_key_ref", m.aggregate_key_ref},
                           {"aggregate_key_sha256", m.aggregate_key_sha256}});
    }
    return {{"cluster_id", c.cluster_id},
            {"scenario", c.scenario},
            {"families", c.families},
            {"board_ids", c.board_ids},
            {"members", members}};
}

ClusterSpec cluster_from(const json& j)
{
    ClusterSpec c;
    c.cluster_id = j.at("cluster_id").get<std::string>();
    c.scenario = j.at("scenario").get<int>();
    c.families = j.at("families").get<std::vector<std::string>>();
    c.board_ids = j.at("board_ids").get<std::vector<std::string>>();
    for (const auto& m : j.at("members")) {
        c.members.push_back({m.at("vendor").get<std::string>(), index_set_from(m.at("indices")),
                             m.at("families").get<std::vector<std::string>>(),
                             m.at("aggregate_key_ref").get<std::string>(),
                             m.at("aggregate_key_sha256").get<std::string>()});
    }
    return c;
}

json state_to_json(const RegistryState& s)
{
    json vendors = json::object();
    for (const auto& [id, v] : s.vendors) vendors[id] = to_json(v);
    json boards = json::object();
    for (const auto& [id, b] : s.boards) boards[id] = to_json(b);
    json clusters = json::object();
    for (const auto& [id, c] : s.clusters) clusters[id] = to_json(c);
    return {{"sequence", s.sequence}, {"vendors", vendors}, {"boards", boards}, {"clusters", clusters}};
}

std::string checksum_of(std::string_view text)
{
    auto d = sha256(as_bytes(text));
    return to_hex(ByteView(d).first(8));
}

}  // namespace

pairing::EngineConfig VendorRecord::engine_config() const
{
    pairing::EngineConfig c;
    c.backend = backend;
    c.oracle_modulus = oracle_modulus;
    return c;
}

const SubCluster* ClusterSpec::member_for(std::string_view vendor) const noexcept
{
    for (const auto& m : members) {
        if (m.vendor == vendor) return &m;
    }
    return nullptr;
}

std::string event_to_json(const Event& event, std::uint64_t sequence)
{
    json j = std::visit(
        [](const auto& e) -> json {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, VendorInitialized>) {
                return {{"type", "vendor_init"}, {"vendor", to_json(e.vendor)}};
            } else if constexpr (std::is_same_v<T, BoardRegistered>) {
                return {{"type", "board_register"}, {"board", to_json(e.board)}};
            } else if constexpr (std::is_same_v<T, BoardDeregistered>) {
                return {{"type", "board_deregister"}, {"board_id", e.board_id}};
            } else {
                return {{"type", "cluster_form"}, {"cluster", to_json(e.cluster)}};
            }
        },
        event);
    j["seq"] = sequence;
    return j.dump();
}

std::pair<Event, std::uint64_t> event_from_json(std::string_view text)
{
    try {
        auto j = json::parse(text);
        const auto seq = j.at("seq").get<std::uint64_t>();
        const auto type = j.at("type").get<std::string>();
        if (type == "vendor_init") return {VendorInitialized{vendor_from(j.at("vendor"))}, seq};
        if (type == "board_register") return {BoardRegistered{board_from(j.at("board"))}, seq};
        if (type == "board_deregister") return {BoardDeregistered{j.at("board_id").get<std::string>()}, seq};
        if (type == "cluster_form") return {ClusterFormed{cluster_from(j.at("cluster"))}, seq};
        throw Error(ErrorCode::invalid_encoding, "unknown event type '" + type + "'");
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_encoding, std::string("malformed event: ") + e.what());
    }
}

// ---- RegistryState ---------------------------------------------------------

void RegistryState::apply(const Event& event)
{
    std::visit(
        [this](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, VendorInitialized>) {
                if (vendors.contains(e.vendor.vendor_id)) {
                    throw Error(ErrorCode::duplicate, "vendor '" + e.vendor.vendor_id + "' already initialized");
                }
                if (e.vendor.capacity == 0) throw Error(ErrorCode::invalid_capacity, "capacity must be at least 1");
                vendors.emplace(e.vendor.vendor_id, e.vendor);
            } else if constexpr (std::is_same_v<T, BoardRegistered>) {
                const auto& b = e.board;
                const auto& v = vendor(b.vendor);
                if (auto it = boards.find(b.board_id); it != boards.end() && it->second.status == BoardStatus::active) {
                    throw Error(ErrorCode::duplicate, "board '" + b.board_id + "' already registered");
                }
                if (b.index < 1 || b.index > v.capacity) {
                    throw Error(ErrorCode::registration_refused, "index outside vendor capacity");
                }
                if (active_board(b.vendor, b.index)) {
                    throw Error(ErrorCode::duplicate, "index " + std::to_string(b.index) + " already in use");
                }
                if (b.status != BoardStatus::active) {
                    throw Error(ErrorCode::invalid_argument, "new boards must be active");
                }
                boards.insert_or_assign(b.board_id, b);
            } else if constexpr (std::is_same_v<T, BoardDeregistered>) {
                auto it = boards.find(e.board_id);
                if (it == boards.end()) throw Error(ErrorCode::not_found, "unknown board '" + e.board_id + "'");
                if (it->second.status != BoardStatus::active) {
                    throw Error(ErrorCode::invalid_argument, "board '" + e.board_id + "' already deregistered");
                }
                it->second.status = BoardStatus::deregistered;
            } else {
                if (clusters.contains(e.cluster.cluster_id)) {
                    throw Error(ErrorCode::duplicate, "cluster '" + e.cluster.cluster_id + "' already formed");
                }
                clusters.emplace(e.cluster.cluster_id, e.cluster);
            }
        },
        event);
    ++sequence;
}

const VendorRecord& RegistryState::vendor(std::string_view id) const
{
    auto it = vendors.find(std::string(id));
    if (it == vendors.end()) throw Error(ErrorCode::not_found, "unknown vendor '" + std::string(id) + "'");
    return it->second;
}

const BoardRecord& RegistryState::board(std::string_view id) const
{
    auto it = boards.find(std::string(id));
    if (it == boards.end()) throw Error(ErrorCode::not_found, "unknown board '" + std::string(id) + "'");
    return it->second;
}

const ClusterSpec& RegistryState::cluster(std::string_view id) const
{
    auto it = clusters.find(std::string(id));
    if (it == clusters.end()) throw Error(ErrorCode::not_found, "unknown cluster '" + std::string(id) + "'");
    return it->second;
}

const BoardRecord* RegistryState::active_board(std::string_view vendor, std::uint32_t index) const
{
    for (const auto& [id, b] : boards) {
        if (b.vendor == vendor && b.index == index && b.status == BoardStatus::active) return &b;
    }
    return nullptr;
}

std::optional<std::uint32_t> RegistryState::lowest_free_index(std::string_view vendor_id) const
{
    const auto& v = vendor(vendor_id);
    for (std::uint32_t i = 1; i <= v.capacity; ++i) {
        if (!active_board(vendor_id, i)) return i;
    }
    return std::nullopt;
}

std::string RegistryState::canonical_json() const
{
    return state_to_json(*this).dump();
}

RegistryState RegistryState::from_json(std::string_view text)
{
    try {
        auto j = json::parse(text);
        RegistryState s;
        s.sequence = j.at("sequence").get<std::uint64_t>();
        for (const auto& [id, v] : j.at("vendors").items()) s.vendors.emplace(id, vendor_from(v));
        for (const auto& [id, b] : j.at("boards").items()) s.boards.emplace(id, board_from(b));
        for (const auto& [id, c] : j.at("clusters").items()) s.clusters.emplace(id, cluster_from(c));
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_encoding, std::string("malformed registry state: ") + e.what());
    }
}

std::string RegistryState::digest() const
{
    return sha256_hex(as_bytes(canonical_json()));
}

// ---- Registry --------------------------------------------------------------

namespace {

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_failure, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class FileLock {
public:
    explicit FileLock(const fs::path& p)
    {
        fd_ = ::open(p.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0) throw Error(ErrorCode::io_failure, "cannot open " + p.string() + ": " + std::strerror(errno));
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw Error(ErrorCode::io_failure, "cannot lock " + p.string());
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;
    ~FileLock()
    {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }

    void append(std::string_view text)
    {
        while (!text.empty()) {
            auto n = ::write(fd_, text.data(), text.size());
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::io_failure, std::string("journal write failed: ") + std::strerror(errno));
            }
            text.remove_prefix(static_cast<std::size_t>(n));
        }
        ::fsync(fd_);
    }

private:
    int fd_ = -1;
};

}  // namespace

RegistryState Registry::replay(const fs::path& journal)
{
    RegistryState state;
    if (!fs::exists(journal)) return state;
    const auto text = read_file(journal);

    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        ++line_no;
        const auto where = " at journal line " + std::to_string(line_no);
        auto nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            throw Error(ErrorCode::journal_corruption, "truncated entry" + where);
        }
        std::string_view line(text.data() + pos, nl - pos);
        pos = nl + 1;
        if (line.size() < 18 || line[16] != ' ') {
            throw Error(ErrorCode::journal_corruption, "malformed entry" + where);
        }
        auto body = line.substr(17);
        if (checksum_of(body) != line.substr(0, 16)) {
            throw Error(ErrorCode::journal_corruption, "checksum mismatch" + where);
        }
        try {
            auto [event, seq] = event_from_json(body);
            if (seq != state.sequence + 1) {
                throw Error(ErrorCode::journal_corruption, "sequence gap" + where);
            }
            state.apply(event);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::journal_corruption) throw;
            throw Error(ErrorCode::journal_corruption, std::string(e.what()) + where);
        }
    }
    return state;
}

RegistryState Registry::load_snapshot(const fs::path& snapshot)
{
    try {
        auto j = json::parse(read_file(snapshot));
        auto state = RegistryState::from_json(j.at("state").dump());
        if (state.digest() != j.at("digest").get<std::string>()) {
            throw Error(ErrorCode::integrity_failure, "snapshot digest does not match its contents");
        }
        return state;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::integrity_failure, std::string("malformed snapshot: ") + e.what());
    }
}

Registry Registry::open(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir / "keys", ec);
    if (ec) throw Error(ErrorCode::io_failure, "cannot create registry at " + dir.string() + ": " + ec.message());
    Registry reg(dir);
    reg.refresh();
    if (fs::exists(reg.snapshot_path())) {
        auto snap = load_snapshot(reg.snapshot_path());
        if (snap.sequence > reg.state_.sequence) {
            throw Error(ErrorCode::journal_corruption, "journal is shorter than the snapshot");
        }
        if (snap.sequence == reg.state_.sequence && snap.digest() != reg.state_.digest()) {
            throw Error(ErrorCode::integrity_failure, "journal replay disagrees with the snapshot");
        }
    }
    return reg;
}

void Registry::refresh()
{
    state_ = replay(journal_path());
}

void Registry::commit(const Planner& plan)
{
    FileLock lock(journal_path());
    refresh();
    auto events = plan(state_);
    auto next = state_;
    std::string lines;
    for (const auto& e : events) {
        next.apply(e);
        auto body = event_to_json(e, next.sequence);
        lines += checksum_of(body) + " " + body + "\n";
    }
    lock.append(lines);
    state_ = std::move(next);
    write_snapshot();
}

void Registry::write_snapshot() const
{
    json j = {{"sequence", state_.sequence}, {"digest", state_.digest()}, {"state", state_to_json(state_)}};
    const auto tmp = snapshot_path().string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << j.dump(2) << "\n";
        if (!out) throw Error(ErrorCode::io_failure, "cannot write snapshot");
    }
    fs::rename(tmp, snapshot_path());
}

}  // namespace agencid::workflow
