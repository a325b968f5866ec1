#include "agencid/workflow/registry.hpp"
#include "agencid/workflow/workflow.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace agencid;
using workflow::Workflow;

constexpr int exit_rejected = 2;
constexpr int exit_auth = 3;
constexpr std::string_view default_passphrase = "agencid-local";
// 2^61 - 1.
constexpr std::uint64_t default_oracle_modulus = 2305843009213693951ULL;

Bytes read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path);
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, ByteView bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void print_state(const workflow::RegistryState& s)
{
    std::cout << "vendors:\n";
    for (const auto& [id, v] : s.vendors) {
        std::cout << "  " << id << "  capacity=" << v.capacity << "  backend=" << pairing::to_string(v.backend)
                  << "\n";
    }
    std::cout << "boards:\n";
    for (const auto& [id, b] : s.boards) {
        std::cout << "  " << id << "  vendor=" << b.vendor << "  index=" << b.index << "  family=" << b.family
                  << "  " << (b.status == workflow::BoardStatus::active ? "active" : "deregistered") << "\n";
    }
    std::cout << "clusters:\n";
    for (const auto& [id, c] : s.clusters) {
        std::cout << "  " << id << "  scenario=" << c.scenario;
        for (const auto& m : c.members) std::cout << "  " << m.vendor << ":" << m.indices.to_string();
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Key-aggregate bitstream encryption: vendor, cloud, IP provider and board roles"};
    app.require_subcommand(1);

    std::string registry_dir = "registry";
    std::string engine_name = "production";
    std::uint64_t oracle_modulus = default_oracle_modulus;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> passphrase;
    app.add_option("--registry", registry_dir, "Registry directory")->capture_default_str();
    app.add_option("--engine", engine_name, "Pairing backend for vendor-init")
        ->check(CLI::IsMember({"production", "symbolic"}))
        ->capture_default_str();
    app.add_option("--oracle-modulus", oracle_modulus, "Prime modulus for the symbolic backend")
        ->capture_default_str();
    app.add_option("--seed", seed, "Deterministic randomness (testing only)");
    app.add_option("--passphrase", passphrase, "Key-file passphrase (default: $AGENCID_PASSPHRASE)");

    auto* vendor_init = app.add_subcommand("vendor-init", "Set up a vendor keyspace");
    std::string vendor;
    std::uint32_t capacity = 0;
    vendor_init->add_option("--vendor", vendor)->required();
    vendor_init->add_option("--capacity", capacity, "Number of board indices N")->required();

    auto* board_register = app.add_subcommand("board-register", "Enroll a board under the lowest free index");
    std::string board;
    std::string family;
    board_register->add_option("--vendor", vendor)->required();
    board_register->add_option("--board", board)->required();
    board_register->add_option("--family", family)->required();

    auto* board_deregister = app.add_subcommand("board-deregister", "Retire a board and free its index");
    board_deregister->add_option("--board", board)->required();

    auto* cluster_form = app.add_subcommand("cluster-form", "Form a cluster and extract its aggregate keys");
    std::string cluster;
    std::string boards_csv;
    std::string indices_csv;
    std::optional<int> scenario;
    cluster_form->add_option("--cluster", cluster)->required();
    auto* by_boards = cluster_form->add_option("--boards", boards_csv, "Comma-separated board ids");
    auto* by_indices = cluster_form->add_option("--indices", indices_csv, "Comma-separated indices (with --vendor)");
    by_boards->excludes(by_indices);
    cluster_form->add_option("--vendor", vendor);
    cluster_form->add_option("--scenario", scenario, "Expected scenario (1, 2 or 3)")->check(CLI::Range(1, 3));

    auto* ipp_encrypt = app.add_subcommand("ipp-encrypt", "Encrypt a payload for a cluster");
    std::vector<std::string> inputs;
    std::string out;
    std::string package_id;
    ipp_encrypt->add_option("--cluster", cluster)->required();
    ipp_encrypt->add_option("--in", inputs, "[FAMILY=]PATH, repeatable")->required();
    ipp_encrypt->add_option("--out", out, "Package file (suffixed per family when several are produced)")
        ->required();
    ipp_encrypt->add_option("--package-id", package_id, "Defaults to the output file name");

    auto* board_decrypt = app.add_subcommand("board-decrypt", "Decrypt a package on a board");
    std::string in;
    board_decrypt->add_option("--board", board)->required();
    board_decrypt->add_option("--in", in)->required();
    board_decrypt->add_option("--out", out)->required();

    auto* registry_show = app.add_subcommand("registry-show", "Print the registry and check journal replay");
    bool as_json = false;
    registry_show->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (!passphrase) {
            const char* env = std::getenv("AGENCID_PASSPHRASE");
            passphrase = env ? env : std::string(default_passphrase);
        }
        auto registry = workflow::Registry::open(registry_dir);
        auto rng = Rng::from_optional_seed(seed);
        Workflow wf(registry, rng, *passphrase);

        if (*vendor_init) {
            auto config = engine_name == "symbolic" ? pairing::EngineConfig::symbolic(oracle_modulus)
                                                    : pairing::EngineConfig::production();
            const auto v = wf.vendor_init(vendor, capacity, config);
            std::cout << "vendor " << v.vendor_id << " capacity " << v.capacity << " backend "
                      << pairing::to_string(v.backend) << "\n";
        } else if (*board_register) {
            const auto b = wf.register_board(vendor, board, family);
            std::cout << "board " << b.board_id << " index " << b.index << "\n";
        } else if (*board_deregister) {
            wf.deregister_board(board);
            std::cout << "board " << board << " deregistered\n";
        } else if (*cluster_form) {
            workflow::ClusterSpec spec;
            if (!boards_csv.empty()) {
                spec = wf.form_cluster(cluster, split(boards_csv, ','), scenario);
            } else if (!indices_csv.empty() && !vendor.empty()) {
                spec = wf.form_cluster(cluster, vendor, kac::IndexSet::parse(indices_csv), scenario);
            } else {
                throw Error(ErrorCode::invalid_argument, "give --boards, or --vendor with --indices");
            }
            std::cout << "cluster " << spec.cluster_id << " scenario " << spec.scenario;
            for (const auto& m : spec.members) std::cout << " " << m.vendor << ":" << m.indices.to_string();
            std::cout << "\n";
        } else if (*ipp_encrypt) {
            std::map<std::string, Bytes> payloads;
            for (const auto& spec : inputs) {
                std::string fam;
                std::string path = spec;
                if (auto eq = spec.find('='); eq != std::string::npos && spec.find('/') > eq) {
                    fam = spec.substr(0, eq);
                    path = spec.substr(eq + 1);
                }
                if (!payloads.emplace(fam, read_file(path)).second) {
                    throw Error(ErrorCode::invalid_argument, "two payloads for family '" + fam + "'");
                }
            }
            if (package_id.empty()) package_id = std::filesystem::path(out).filename().string();
            const auto result = wf.ipp_encrypt(cluster, payloads, package_id);
            const bool multi_vendor = result.packages.size() > 1
                                      && result.packages.front().vendor != result.packages.back().vendor;
            for (const auto& p : result.packages) {
                std::string path = out;
                if (result.packages.size() > 1) {
                    path += multi_vendor ? "." + p.vendor + "." + p.family : "." + p.family;
                }
                write_file(path, p.bytes);
                std::cout << path << "  cluster=" << p.cluster_id << "  package=" << p.package_id << "  "
                          << p.bytes.size() << " bytes\n";
            }
            std::cout << "key generations " << result.tally.key_generations << ", key encryptions "
                      << result.tally.key_encryptions << ", seals " << result.tally.seals << "\n";
        } else if (*board_decrypt) {
            const auto outcome = wf.board_decrypt(board, read_file(in));
            if (!outcome.recovered()) {
                std::cerr << "rejected: " << outcome.reason << "\n";
                return exit_rejected;
            }
            write_file(out, *outcome.payload);
            std::cout << "recovered " << outcome.payload->size() << " bytes\n";
        } else if (*registry_show) {
            const auto& state = registry.state();
            const auto replayed = workflow::Registry::replay(registry.journal_path());
            std::optional<workflow::RegistryState> snapshot;
            if (std::filesystem::exists(registry.snapshot_path())) {
                snapshot = workflow::Registry::load_snapshot(registry.snapshot_path());
            }
            const bool consistent = snapshot ? snapshot->digest() == replayed.digest() : replayed.sequence == 0;
            if (as_json) {
                std::cout << "{\"sequence\":" << state.sequence << ",\"digest\":\"" << state.digest()
                          << "\",\"replay_matches_snapshot\":" << (consistent ? "true" : "false")
                          << ",\"state\":" << state.canonical_json() << "}\n";
            } else {
                print_state(state);
                std::cout << "sequence " << state.sequence << "\n"
                          << "digest " << state.digest() << "\n"
                          << "replay matches snapshot: " << (consistent ? "yes" : "no") << "\n";
            }
            return consistent ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::authentication_failure ? exit_auth : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
