#include "agencid/workflow/registry.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <thread>

using namespace agencid;
using namespace agencid::workflow;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::invalid_argument;
}

std::string message_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

class TempDir {
public:
    TempDir()
    {
        auto rng = Rng::system();
        path_ = fs::temp_directory_path() / ("agencid-test-" + to_hex(rng.bytes(8)));
        fs::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    [[nodiscard]] const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

VendorRecord vendor(const std::string& id, std::uint32_t capacity)
{
    VendorRecord v;
    v.vendor_id = id;
    v.capacity = capacity;
    v.public_key_sha256 = std::string(64, 'a');
    v.master_key_sha256 = std::string(64, 'b');
    return v;
}

BoardRecord board(const std::string& id, const std::string& v, std::uint32_t index)
{
    return {id, v, index, "F1", BoardStatus::active, "keys/boards/" + id + ".dk", std::string(64, 'c')};
}

std::vector<Event> sample_events()
{
    ClusterSpec c;
    c.cluster_id = "c1";
    c.families = {"F1"};
    c.board_ids = {"b1", "b3"};
    c.members.push_back({"fv", kac::IndexSet{1, 3}, {"F1"}, "keys/clusters/c1/fv.agk", std::string(64, 'd')});
    return {VendorInitialized{vendor("fv", 4)}, BoardRegistered{board("b1", "fv", 1)},
            BoardRegistered{board("b2", "fv", 2)}, BoardRegistered{board("b3", "fv", 3)},
            BoardDeregistered{"b2"},          ClusterFormed{c}};
}

std::vector<std::string> read_lines(const fs::path& p)
{
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

}  // namespace

TEST(Registry, EmptyJournalIsEmptyRegistry)
{
    TempDir dir;
    auto reg = Registry::open(dir.path());
    EXPECT_EQ(reg.state(), RegistryState{});
    EXPECT_EQ(Registry::replay(reg.journal_path()), RegistryState{});
    EXPECT_EQ(reg.state().canonical_json(), R"({"boards":{},"clusters":{},"sequence":0,"vendors":{}})");
}

TEST(Registry, ReplayReproducesSnapshot)
{
    TempDir dir;
    auto reg = Registry::open(dir.path());
    for (const auto& e : sample_events()) reg.commit([&](const RegistryState&) { return std::vector<Event>{e}; });
    EXPECT_EQ(reg.state().sequence, 6u);

    const auto replayed = Registry::replay(reg.journal_path());
    const auto snapshot = Registry::load_snapshot(reg.snapshot_path());
    EXPECT_EQ(replayed, reg.state());
    EXPECT_EQ(snapshot, reg.state());
    EXPECT_EQ(replayed.digest(), snapshot.digest());
    EXPECT_EQ(RegistryState::from_json(reg.state().canonical_json()), reg.state());

    auto reopened = Registry::open(dir.path());
    EXPECT_EQ(reopened.state().digest(), reg.state().digest());
    EXPECT_EQ(reopened.state().board("b2").status, BoardStatus::deregistered);
    EXPECT_EQ(reopened.state().lowest_free_index("fv"), 2u);
}

TEST(Registry, EventsRoundTripThroughJson)
{
    std::uint64_t seq = 0;
    for (const auto& e : sample_events()) {
        const auto text = event_to_json(e, ++seq);
        const auto [back, s] = event_from_json(text);
        EXPECT_EQ(s, seq);
        EXPECT_EQ(back.index(), e.index());
        EXPECT_EQ(event_to_json(back, s), text);
    }
    EXPECT_EQ(code_of([] { (void)event_from_json(R"({"seq":1,"type":"nope"})"); }), ErrorCode::invalid_encoding);
}

TEST(Registry, TruncatedJournalIsReportedAtTheTruncationPoint)
{
    TempDir dir;
    {
        auto reg = Registry::open(dir.path());
        for (const auto& e : sample_events()) reg.commit([&](const RegistryState&) { return std::vector<Event>{e}; });
    }
    const auto journal = dir.path() / "journal.log";
    const auto lines = read_lines(journal);
    ASSERT_EQ(lines.size(), 6u);
    std::string text;
    for (std::size_t i = 0; i < 3; ++i) text += lines[i] + "\n";
    text += lines[3].substr(0, lines[3].size() / 2);
    write_text(journal, text);

    EXPECT_EQ(code_of([&] { (void)Registry::replay(journal); }), ErrorCode::journal_corruption);
    EXPECT_NE(message_of([&] { (void)Registry::replay(journal); }).find("line 4"), std::string::npos);
    EXPECT_EQ(code_of([&] { (void)Registry::open(dir.path()); }), ErrorCode::journal_corruption);
}

TEST(Registry, ChecksumCatchesEditedEntry)
{
    TempDir dir;
    {
        auto reg = Registry::open(dir.path());
        for (const auto& e : sample_events()) reg.commit([&](const RegistryState&) { return std::vector<Event>{e}; });
    }
    const auto journal = dir.path() / "journal.log";
    auto lines = read_lines(journal);
    const auto pos = lines[1].find("\"index\":1");
    ASSERT_NE(pos, std::string::npos);
    lines[1].replace(pos, 9, "\"index\":4");
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    write_text(journal, text);
    EXPECT_NE(message_of([&] { (void)Registry::replay(journal); }).find("checksum mismatch at journal line 2"),
              std::string::npos);
}

TEST(Registry, DroppedTailIsCaughtByTheSnapshot)
{
    TempDir dir;
    {
        auto reg = Registry::open(dir.path());
        for (const auto& e : sample_events()) reg.commit([&](const RegistryState&) { return std::vector<Event>{e}; });
    }
    const auto journal = dir.path() / "journal.log";
    const auto lines = read_lines(journal);
    std::string text;
    for (std::size_t i = 0; i < 5; ++i) text += lines[i] + "\n";
    write_text(journal, text);
    EXPECT_EQ(code_of([&] { (void)Registry::open(dir.path()); }), ErrorCode::journal_corruption);
}

TEST(Registry, EditedSnapshotIsAnIntegrityFailure)
{
    TempDir dir;
    {
        auto reg = Registry::open(dir.path());
        for (const auto& e : sample_events()) reg.commit([&](const RegistryState&) { return std::vector<Event>{e}; });
    }
    const auto snap = dir.path() / "snapshot.json";
    std::ifstream in(snap);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto pos = text.find("\"F1\"");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 4, "\"F2\"");
    write_text(snap, text);
    EXPECT_EQ(code_of([&] { (void)Registry::open(dir.path()); }), ErrorCode::integrity_failure);
}

TEST(RegistryState, ApplyValidatesEvents)
{
    RegistryState s;
    s.apply(VendorInitialized{vendor("fv", 2)});
    EXPECT_EQ(code_of([&] { s.apply(VendorInitialized{vendor("fv", 3)}); }), ErrorCode::duplicate);
    EXPECT_EQ(code_of([&] { s.apply(VendorInitialized{vendor("fw", 0)}); }), ErrorCode::invalid_capacity);
    s.apply(BoardRegistered{board("b1", "fv", 1)});
    EXPECT_EQ(code_of([&] { s.apply(BoardRegistered{board("b2", "fv", 1)}); }), ErrorCode::duplicate);
    EXPECT_EQ(code_of([&] { s.apply(BoardRegistered{board("b1", "fv", 2)}); }), ErrorCode::duplicate);
    EXPECT_EQ(code_of([&] { s.apply(BoardRegistered{board("b3", "fv", 3)}); }), ErrorCode::registration_refused);
    EXPECT_EQ(code_of([&] { s.apply(BoardRegistered{board("b3", "nobody", 1)}); }), ErrorCode::not_found);
    EXPECT_EQ(code_of([&] { s.apply(BoardDeregistered{"ghost"}); }), ErrorCode::not_found);
    const auto before = s.sequence;
    s.apply(BoardDeregistered{"b1"});
    EXPECT_EQ(s.sequence, before + 1);
    EXPECT_EQ(s.lowest_free_index("fv"), 1u);
}

TEST(Registry, FailedPlanAppendsNothing)
{
    TempDir dir;
    auto reg = Registry::open(dir.path());
    reg.commit([](const RegistryState&) { return std::vector<Event>{VendorInitialized{vendor("fv", 1)}}; });
    const auto size = fs::file_size(reg.journal_path());
    EXPECT_THROW(reg.commit([](const RegistryState&) {
        return std::vector<Event>{BoardRegistered{board("b1", "fv", 1)}, BoardRegistered{board("b2", "fv", 1)}};
    }),
                 Error);
    EXPECT_EQ(fs::file_size(reg.journal_path()), size);
    EXPECT_EQ(Registry::replay(reg.journal_path()).sequence, 1u);
}

TEST(Registry, ConcurrentWritersAreSerialized)
{
    TempDir dir;
    (void)Registry::open(dir.path());
    auto writer = [&](const std::string& prefix) {
        auto reg = Registry::open(dir.path());
        for (int i = 0; i < 15; ++i) {
            reg.commit([&](const RegistryState&) {
                return std::vector<Event>{VendorInitialized{vendor(prefix + std::to_string(i), 1)}};
            });
        }
    };
    std::thread a(writer, "a");
    std::thread b(writer, "b");
    a.join();
    b.join();
    const auto state = Registry::replay(dir.path() / "journal.log");
    EXPECT_EQ(state.sequence, 30u);
    EXPECT_EQ(state.vendors.size(), 30u);
    EXPECT_EQ(Registry::open(dir.path()).state(), state);
}
