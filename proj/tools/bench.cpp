#include "agencid/bench/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace agencid;

int main(int argc, char** argv)
{
    CLI::App app{"Cluster-size sweeps: AgEncID against per-board encryption"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one experiment and write its trials as CSV");
    int experiment = 1;
    std::string out;
    std::string engine_name = "production";
    std::uint64_t oracle_modulus = 2305843009213693951ULL;
    std::uint64_t seed = 1;
    unsigned repetitions = 7;
    unsigned warmup = 1;
    std::string plot_dir;
    run->add_option("--experiment", experiment)->required()->check(CLI::Range(1, 4));
    run->add_option("--out", out, "CSV file")->required();
    run->add_option("--engine", engine_name)->check(CLI::IsMember({"production", "symbolic"}))->capture_default_str();
    run->add_option("--oracle-modulus", oracle_modulus)->capture_default_str();
    run->add_option("--seed", seed)->capture_default_str();
    run->add_option("--repetitions", repetitions)->check(CLI::PositiveNumber)->capture_default_str();
    run->add_option("--warmup", warmup)->capture_default_str();
    run->add_option("--plot", plot_dir, "Directory for SVG plots");

    auto* assert_cmd = app.add_subcommand("assert", "Check operation counts and timing shape in a CSV");
    std::string in;
    assert_cmd->add_option("--in", in, "CSV file")->required();
    assert_cmd->add_option("--plot", plot_dir, "Directory for SVG plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        std::vector<bench::TrialRecord> records;
        if (*run) {
            auto plan = bench::ExperimentPlan::standard(experiment, repetitions);
            plan.warmup = warmup;
            plan.seed = seed;
            plan.engine = engine_name == "symbolic" ? pairing::EngineConfig::symbolic(oracle_modulus)
                                                    : pairing::EngineConfig::production();
            records = bench::run_experiment(plan, [](const std::string& msg) { std::cerr << msg << "\n"; });
            std::ofstream file(out);
            bench::write_csv(file, records);
            if (!file) throw Error(ErrorCode::io_failure, "cannot write " + out);
            std::cout << "wrote " << records.size() << " trials (" << plan.timed_phase() << " phase timed) to "
                      << out << "\n";
        } else {
            std::ifstream file(in);
            if (!file) throw Error(ErrorCode::io_failure, "cannot read " + in);
            records = bench::parse_csv(file);
            const auto report = bench::fit_and_assert(records);
            std::cout << report.to_text();
            if (!plot_dir.empty()) {
                for (const auto& p : bench::write_plots(records, plot_dir)) std::cout << "plot " << p.string() << "\n";
            }
            return report.passed() ? 0 : 1;
        }
        if (!plot_dir.empty()) {
            for (const auto& p : bench::write_plots(records, plot_dir)) std::cout << "plot " << p.string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
