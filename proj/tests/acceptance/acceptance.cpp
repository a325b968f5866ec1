// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include "agencid/bench/experiment.hpp"
#include "agencid/kac/kac.hpp"
#include "agencid/pairing/symbolic_engine.hpp"
#include "agencid/pairing/type_a_engine.hpp"
#include "agencid/testing/fixtures.hpp"
#include "agencid/workflow/workflow.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace agencid;
namespace fs = std::filesystem;
using pairing::GroupTag;

namespace {

struct Failure {
    std::string what;
};

void require(bool ok, const std::string& what)
{
    if (!ok) throw Failure{what};
}

std::vector<kac::IndexSet> nonempty_subsets(std::uint32_t n)
{
    std::vector<kac::IndexSet> out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::uint32_t> idx;
        for (std::uint32_t i = 1; i <= n; ++i) {
            if (mask & (1u << (i - 1))) idx.push_back(i);
        }
        out.push_back(kac::IndexSet::from(idx));
    }
    return out;
}

class TempDir {
public:
    explicit TempDir(const std::string& prefix)
        : path_(fs::temp_directory_path() / (prefix + to_hex(Rng::system().bytes(8))))
    {
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

Bytes read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& p, ByteView bytes)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

// ---- 1 and 2: correctness and rejection over the symbolic sweep ----------

struct SweepTally {
    std::uint64_t recoveries = 0;
    std::uint64_t rejections = 0;
};

SweepTally symbolic_sweep()
{
    // Hand-traced: n = 2, alpha = 3, gamma = 5, t = 7, q = 101.
    {
        const pairing::SymbolicEngine e(101);
        const auto params = agencid::testing::params_with_alpha(e, 2, 3);
        const auto km = kac::keygen(e, params, kac::MasterSecretKey{e.scalars().from_u64(5)});
        const kac::IndexSet s{1, 2};
        const auto agg = kac::extract(e, params, s);
        const auto m = e.target(5);
        const auto ct = agencid::testing::encrypt_with_t(e, km.pk, s, agg, m, 7);
        require(ct.c1 == e.element(7, GroupTag::second), "fixture c1 != 7");
        require(ct.c2 == e.element(18, GroupTag::second), "fixture c2 != 18");
        require(ct.c3 == e.target(5 + 88), "fixture c3 != m + 88");
        const auto out = kac::decrypt(e, params, s, 1, km.board_keys[0], ct);
        require(out && *out == m, "fixture: board 1 does not recover m");
    }

    SweepTally tally;
    auto rng = Rng::seeded(2024);
    for (std::uint64_t q : {101u, 257u}) {
        const pairing::SymbolicEngine e(q);
        for (std::uint32_t n = 1; n <= 8; ++n) {
            const auto subsets = nonempty_subsets(n);
            for (const auto& s : subsets) {
                for (int draw = 0; draw < 20; ++draw) {
                    const auto alpha = e.scalars().random_nonzero(rng);
                    const auto params = agencid::testing::params_with_alpha(e, n, alpha);
                    const auto km = kac::keygen(e, params, kac::MasterSecretKey{e.scalars().random_nonzero(rng)});
                    const auto agg = kac::extract(e, params, s);
                    const auto m = e.random_gt(rng);
                    const auto ct =
                        agencid::testing::encrypt_with_t(e, km.pk, s, agg, m, e.scalars().random(rng));
                    for (std::uint32_t i = 1; i <= n; ++i) {
                        const auto out = kac::decrypt(e, params, s, i, km.board_keys[i - 1], ct);
                        if (s.contains(i)) {
                            require(out && *out == m, "q=" + std::to_string(q) + " n=" + std::to_string(n)
                                                          + " S=" + s.to_string() + " i=" + std::to_string(i)
                                                          + ": wrong plaintext");
                            ++tally.recoveries;
                        } else {
                            require(!out, "q=" + std::to_string(q) + " n=" + std::to_string(n) + " S="
                                              + s.to_string() + " i=" + std::to_string(i) + ": false accept");
                            ++tally.rejections;
                        }
                    }
                }
            }
        }
    }
    return tally;
}

// ---- 3: pairing identities ------------------------------------------------

std::string pairing_identities()
{
    std::uint64_t checks = 0;
    for (std::uint64_t q : {101u, 257u}) {
        const pairing::SymbolicEngine e(q);
        const auto& f = e.scalars();
        const auto g = e.generator(GroupTag::first);
        require(e.pair(g, e.to_second(g)) != e.gt_identity(), "symbolic pairing is degenerate");
        for (std::uint64_t a = 0; a < 32; ++a) {
            const auto pa = e.element(a);
            for (std::uint64_t b = 0; b < 32; ++b) {
                const auto pb = e.element(b, GroupTag::second);
                const auto base = e.pair(pa, pb);
                for (std::uint64_t x = 0; x < 32; ++x) {
                    const auto xa = e.scalar_mul(f.from_u64(x), pa);
                    for (std::uint64_t y = 0; y < 32; ++y) {
                        const auto lhs = e.pair(xa, e.scalar_mul(f.from_u64(y), pb));
                        require(lhs == e.gt_scale(base, f.from_u64(x * y)), "bilinearity fails on the symbolic grid");
                        ++checks;
                    }
                }
                for (std::uint64_t c = 0; c < 32; ++c) {
                    const auto pc = e.element(c, GroupTag::second);
                    const auto lhs = e.pair(e.sub(pa, e.element(b)), pc);
                    require(lhs == e.gt_uncombine(e.pair(pa, pc), e.pair(e.element(b), pc)),
                            "quotient identity fails on the symbolic grid");
                    ++checks;
                }
            }
        }
    }

    const pairing::TypeAEngine e;
    const auto& f = e.scalars();
    auto rng = Rng::seeded(77);
    const auto p = e.generator(GroupTag::first);
    const auto q = e.generator(GroupTag::second);
    const auto epq = e.pair(p, q);
    require(epq != e.gt_identity(), "curve pairing is degenerate");
    for (int trial = 0; trial < 1000; ++trial) {
        const auto x = f.random(rng);
        const auto y = f.random(rng);
        require(e.pair(e.scalar_mul(x, p), e.scalar_mul(y, q)) == e.gt_scale(epq, f.mul(x, y)),
                "bilinearity fails on the curve, trial " + std::to_string(trial));
        const auto a = e.scalar_mul(f.random(rng), p);
        const auto b = e.scalar_mul(f.random(rng), p);
        const auto c = e.scalar_mul(f.random(rng), q);
        require(e.pair(e.sub(a, b), c) == e.gt_uncombine(e.pair(a, c), e.pair(b, c)),
                "quotient identity fails on the curve, trial " + std::to_string(trial));
        checks += 2;
    }
    return std::to_string(checks) + " identities, non-degenerate on both backends";
}

// ---- 4: constant-size artifacts --------------------------------------------

std::string constant_sizes()
{
    std::ostringstream detail;
    auto rng = Rng::seeded(4);
    const pairing::TypeAEngine curve;
    const pairing::SymbolicEngine symbolic(2305843009213693951ULL);
    for (const pairing::PairingEngine* e : {static_cast<const pairing::PairingEngine*>(&curve),
                                            static_cast<const pairing::PairingEngine*>(&symbolic)}) {
        const auto params = kac::setup(*e, 20, rng);
        const auto km = kac::keygen(*e, params, rng);
        std::set<std::size_t> agg_sizes;
        std::set<std::size_t> ct_sizes;
        for (std::uint32_t k = 1; k <= 20; ++k) {
            std::vector<std::uint32_t> idx;
            for (std::uint32_t i = 1; i <= k; ++i) idx.push_back(i);
            const auto s = kac::IndexSet::from(idx);
            const auto agg = kac::extract(*e, params, s);
            const auto ct = kac::encrypt(*e, km.pk, s, agg, e->random_gt(rng), rng);
            agg_sizes.insert(kac::serialize(*e, agg, 20).size());
            ct_sizes.insert(kac::serialize(*e, ct, 20).size());
        }
        require(agg_sizes.size() == 1 && ct_sizes.size() == 1,
                std::string(pairing::to_string(e->backend_id())) + ": sizes vary with |S|");
        detail << pairing::to_string(e->backend_id()) << " aggregate key " << *agg_sizes.begin()
               << " B, ciphertext " << *ct_sizes.begin() << " B, elements " << e->source_encoded_size() << "/"
               << e->target_encoded_size() << " B; ";
    }
    // x coordinate and G_T element of the reference curve.
    detail << "curve source x " << 8 * (curve.source_encoded_size() - 1) << " bits, target "
           << 8 * curve.target_encoded_size() << " bits";
    return detail.str();
}

// ---- 5: pairing counts -----------------------------------------------------

std::string pairing_counts()
{
    std::uint64_t decrypts = 0;
    auto rng = Rng::seeded(5);
    const pairing::TypeAEngine curve;
    const pairing::SymbolicEngine symbolic(257);
    for (const auto& [e, n] : std::vector<std::pair<const pairing::PairingEngine*, std::uint32_t>>{
             {&curve, 6u}, {&symbolic, 8u}}) {
        const auto params = kac::setup(*e, n, rng);
        const auto km = kac::keygen(*e, params, rng);
        for (const auto& s : nonempty_subsets(n)) {
            const auto agg = kac::extract(*e, params, s);
            const auto m = e->random_gt(rng);
            auto before = e->op_counts();
            const auto ct = kac::encrypt(*e, km.pk, s, agg, m, rng);
            require((e->op_counts() - before).pairings == 0, "encrypt paired for S=" + s.to_string());
            for (auto i : s) {
                before = e->op_counts();
                const auto out = kac::decrypt(*e, params, s, i, km.board_keys[i - 1], ct);
                const auto used = (e->op_counts() - before).pairings;
                require(used == 2, "decrypt used " + std::to_string(used) + " pairings for S=" + s.to_string());
                require(out && *out == m, "decrypt failed for S=" + s.to_string());
                ++decrypts;
            }
        }
    }
    return "encrypt 0 pairings over 318 sets, decrypt 2 pairings in " + std::to_string(decrypts) + " runs";
}

// ---- 6, 7, 8: experiments --------------------------------------------------

std::string scenario_counts()
{
    auto plan1 = bench::ExperimentPlan::standard(1, 1);
    const auto rows1 = bench::run_experiment(plan1);
    for (const auto& r : rows1) {
        const std::uint64_t expect = r.scheme == bench::Scheme::agencid ? 1 : r.n;
        require(r.key_generations == expect && r.wraps == expect,
                "experiment 1 " + std::string(bench::to_string(r.scheme)) + " n=" + std::to_string(r.n) + ": "
                    + std::to_string(r.key_generations) + " key generations, " + std::to_string(r.wraps)
                    + " key encryptions");
    }
    auto plan2 = bench::ExperimentPlan::standard(2, 1);
    const auto rows2 = bench::run_experiment(plan2);
    for (const auto& r : rows2) {
        if (r.scheme == bench::Scheme::agencid) {
            require(r.n == 10 && r.m == 3, "experiment 2 shape");
            require(r.seals == 3 && r.wraps == 1, "experiment 2 AgEncID: " + std::to_string(r.seals) + " seals, "
                                                      + std::to_string(r.wraps) + " key encryptions");
        }
    }
    return "experiment 1: 20 points, AgEncID 1 and IEID n; experiment 2: 3 seals, 1 key encryption";
}

std::string run_and_fit(int experiment)
{
    const auto plan = bench::ExperimentPlan::standard(experiment, 5);
    const auto rows = bench::run_experiment(plan);
    const auto report = bench::fit_and_assert(rows);
    std::string detail;
    for (const auto& c : report.checks) {
        if (c.name.find("op counts") == std::string::npos) detail += (detail.empty() ? "" : "; ") + c.detail;
    }
    if (!report.passed()) throw Failure{report.to_text()};
    return detail;
}

// ---- 9: CLI workflow -------------------------------------------------------

int run_cli(const fs::path& dir, const std::string& args)
{
    const std::string cmd = std::string("\"") + AGENCID_CLI + "\" --registry \"" + (dir / "registry").string()
                            + "\" --passphrase accept " + args + " >>\"" + (dir / "cli.log").string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture_cli(const fs::path& dir, const std::string& args)
{
    const std::string cmd = std::string("\"") + AGENCID_CLI + "\" --registry \"" + (dir / "registry").string()
                            + "\" --passphrase accept " + args;
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    require(pipe != nullptr, "popen failed");
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
    require(pclose(pipe) == 0, "registry-show failed");
    return out;
}

std::string cli_workflow()
{
    TempDir tmp("agencid-accept-");
    const auto& d = tmp.path();
    auto ok = [&](const std::string& args) {
        require(run_cli(d, args) == 0, "command failed: " + args + " (see " + (d / "cli.log").string() + ")");
    };
    ok("vendor-init --vendor fv --capacity 4");
    for (int i = 1; i <= 4; ++i) {
        ok("board-register --vendor fv --board b" + std::to_string(i) + " --family F1");
    }
    ok("cluster-form --cluster s1 --boards b1,b3");
    ok("cluster-form --cluster s2 --boards b2,b4");

    auto rng = Rng::seeded(9);
    const auto p1 = rng.bytes(300);
    const auto p2 = rng.bytes(200);
    write_file(d / "p1.bin", p1);
    write_file(d / "p2.bin", p2);
    ok("ipp-encrypt --cluster s1 --in \"" + (d / "p1.bin").string() + "\" --out \"" + (d / "s1.pkg").string()
       + "\"");
    ok("ipp-encrypt --cluster s2 --in \"" + (d / "p2.bin").string() + "\" --out \"" + (d / "s2.pkg").string()
       + "\"");

    auto decrypt = [&](const std::string& board, const fs::path& pkg) {
        fs::remove(d / "out.bin");
        return run_cli(d, "board-decrypt --board " + board + " --in \"" + pkg.string() + "\" --out \""
                              + (d / "out.bin").string() + "\"");
    };
    for (const auto& b : {"b1", "b3"}) {
        require(decrypt(b, d / "s1.pkg") == 0 && read_file(d / "out.bin") == p1,
                std::string(b) + " did not recover the S1 payload");
    }
    for (const auto& b : {"b2", "b4"}) {
        require(decrypt(b, d / "s1.pkg") == 2, std::string(b) + " was not rejected on the S1 package");
        require(decrypt(b, d / "s2.pkg") == 0 && read_file(d / "out.bin") == p2,
                std::string(b) + " did not recover the S2 payload");
    }

    const auto pkg = read_file(d / "s1.pkg");
    std::size_t tampered = 0;
    for (const auto& b : {"b1", "b3"}) {
        for (std::size_t i = 0; i < pkg.size(); ++i) {
            auto bad = pkg;
            bad[i] ^= 0x01;
            write_file(d / "bad.pkg", bad);
            const int code = decrypt(b, d / "bad.pkg");
            require(code == 3, std::string(b) + ": flipping byte " + std::to_string(i) + " gave exit "
                                   + std::to_string(code));
            ++tampered;
        }
    }

    const auto shown = nlohmann::json::parse(capture_cli(d, "registry-show --json"));
    const auto replayed = workflow::Registry::replay(d / "registry" / "journal.log");
    require(shown.at("replay_matches_snapshot").get<bool>(), "CLI reports replay mismatch");
    require(shown.at("digest").get<std::string>() == replayed.digest(), "replayed digest differs from CLI state");
    return "boards 1,3 recover, 2,4 rejected; " + std::to_string(tampered)
           + " single-byte tamperings all exit 3; replay digest " + replayed.digest().substr(0, 16);
}

// ---- 10: dynamic registration ----------------------------------------------

std::string dynamic_registration()
{
    TempDir tmp("agencid-accept-");
    auto registry = workflow::Registry::open(tmp.path());
    auto rng = Rng::seeded(10);
    workflow::Workflow wf(registry, rng, "accept", 1000);
    (void)wf.vendor_init("fv", 4, pairing::EngineConfig::production());
    for (int i = 1; i <= 4; ++i) (void)wf.register_board("fv", "b" + std::to_string(i), "F1");

    auto code_of = [](const std::function<void()>& f) -> std::optional<ErrorCode> {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return std::nullopt;
    };
    require(code_of([&] { (void)wf.register_board("fv", "b5", "F1"); }) == ErrorCode::registration_refused,
            "registration beyond capacity was not refused");

    (void)wf.form_cluster("old", std::vector<std::string>{"b2", "b3"});
    const auto old_payload = rng.bytes(64);
    const auto old_pkg = wf.ipp_encrypt("old", {{"", old_payload}}, "old").packages.at(0).bytes;

    wf.deregister_board("b2");
    const auto b5 = wf.register_board("fv", "b5", "F1");
    require(b5.index == 2, "freed index not reused (got " + std::to_string(b5.index) + ")");
    require(code_of([&] { (void)wf.register_board("fv", "b6", "F1"); }) == ErrorCode::registration_refused,
            "capacity not enforced after reuse");
    require(code_of([&] { (void)wf.board_decrypt("b2", old_pkg); }) == ErrorCode::key_unavailable,
            "deregistered board still decrypts");

    (void)wf.form_cluster("new", std::vector<std::string>{"b1", "b5"});
    const auto payload = rng.bytes(500);
    const auto pkg = wf.ipp_encrypt("new", {{"", payload}}, "new").packages.at(0).bytes;
    for (const auto& b : {"b1", "b5"}) {
        const auto out = wf.board_decrypt(b, pkg);
        require(out.recovered() && *out.payload == payload, std::string(b) + " did not recover after reuse");
    }
    for (const auto& b : {"b3", "b4"}) {
        require(!wf.board_decrypt(b, pkg).recovered(), std::string(b) + " accepted a package outside its cluster");
    }
    const auto again = wf.board_decrypt("b3", old_pkg);
    require(again.recovered() && *again.payload == old_payload, "b3 lost access to an earlier package");
    require(workflow::Registry::replay(registry.journal_path()) == registry.state(), "replay differs from state");
    return "5th board refused, b5 reuses index 2, b2 key unavailable, new cluster {1,2} decrypts correctly";
}

}  // namespace

int main()
{
    int failures = 0;
    auto criterion = [&](int id, const std::string& name, const std::function<std::string()>& body) {
        const auto start = std::chrono::steady_clock::now();
        std::string status = "PASS";
        std::string detail;
        try {
            detail = body();
        } catch (const Failure& f) {
            status = "FAIL";
            detail = f.what;
        } catch (const std::exception& e) {
            status = "FAIL";
            detail = std::string("unexpected error: ") + e.what();
        }
        const auto secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (status == "FAIL") ++failures;
        std::ostringstream line;
        line.precision(2);
        line << std::fixed << status << " " << id << " " << name << " (" << secs << " s): " << detail;
        std::cout << line.str() << std::endl;
    };

    SweepTally sweep;
    bool sweep_ok = false;
    std::string sweep_error;
    criterion(1, "correctness", [&] {
        try {
            sweep = symbolic_sweep();
            sweep_ok = true;
        } catch (const Failure& f) {
            sweep_error = f.what;
            throw;
        }
        return std::to_string(sweep.recoveries) + " recoveries for q in {101, 257}, n <= 8, 20 draws per set";
    });
    criterion(2, "rejection", [&] {
        require(sweep_ok, "sweep did not complete: " + sweep_error);
        return std::to_string(sweep.rejections) + " non-member decryptions, 0 false accepts";
    });
    criterion(3, "pairing identities", pairing_identities);
    criterion(4, "constant-size artifacts", constant_sizes);
    criterion(5, "pairing counts", pairing_counts);
    criterion(6, "scenario op counts", scenario_counts);
    criterion(7, "timing shape", [] { return run_and_fit(4); });
    criterion(8, "payload volume", [] { return run_and_fit(3); });
    criterion(9, "workflow end-to-end", cli_workflow);
    criterion(10, "dynamic registration", dynamic_registration);

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
