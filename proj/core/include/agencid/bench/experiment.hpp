#pragma once

// Cluster-size and family sweeps comparing AgEncID packages against the
// per-board baseline, with operation counters and wall-clock medians.

#include "agencid/pairing/engine.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace agencid::bench {

enum class Scheme { agencid, ieid };

[[nodiscard]] std::string_view to_string(Scheme s) noexcept;
[[nodiscard]] Scheme scheme_from_string(std::string_view s);

struct SweepPoint {
    int scenario = 1;
    /// Boards per family; n is the sum, m the number of entries.
    std::vector<std::uint32_t> family_sizes;
    std::size_t payload_bytes = 0;

    [[nodiscard]] std::uint32_t n() const noexcept;
    [[nodiscard]] std::uint32_t m() const noexcept { return static_cast<std::uint32_t>(family_sizes.size()); }
};

struct ExperimentPlan {
    int experiment = 1;
    std::vector<SweepPoint> points;
    std::vector<Scheme> schemes{Scheme::agencid, Scheme::ieid};
    unsigned repetitions = 7;
    /// Untimed runs before each point's measured repetitions.
    unsigned warmup = 1;
    pairing::EngineConfig engine = pairing::EngineConfig::production();
    std::uint64_t seed = 1;

    /// Experiment 1: n = 1..20, one family, 64 KiB.
    /// Experiment 2: n = 10 as families of 3/3/4, 64 KiB.
    /// Experiment 3: n = 5, one family, payloads 1 KiB, 64 KiB, 1 MiB.
    /// Experiment 4: n = 1..20 in one family and n = 3..20 over three
    /// families, 32-byte payloads; times the key phase.
    [[nodiscard]] static ExperimentPlan standard(int experiment, unsigned repetitions = 7);

    /// Throws ErrorCode::invalid_argument.
    void validate() const;
    /// What wall_ns measures: "key" for experiment 4, "seal" otherwise.
    [[nodiscard]] std::string_view timed_phase() const noexcept;
};

struct TrialRecord {
    int experiment = 0;
    Scheme scheme = Scheme::agencid;
    int scenario = 1;
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::size_t payload_bytes = 0;
    std::uint64_t pairings = 0;
    std::uint64_t group_adds = 0;
    std::uint64_t scalar_muls = 0;
    std::uint64_t seals = 0;
    /// Key encryptions: KAC encryptions for AgEncID, key wraps for the baseline.
    std::uint64_t wraps = 0;
    std::uint64_t wall_ns = 0;
    /// Symmetric keys or session secrets drawn. Not part of the CSV.
    std::uint64_t key_generations = 0;

    friend bool operator==(const TrialRecord& a, const TrialRecord& b)
    {
        return a.experiment == b.experiment && a.scheme == b.scheme && a.scenario == b.scenario && a.n == b.n
               && a.m == b.m && a.payload_bytes == b.payload_bytes && a.pairings == b.pairings
               && a.group_adds == b.group_adds && a.scalar_muls == b.scalar_muls && a.seals == b.seals
               && a.wraps == b.wraps && a.wall_ns == b.wall_ns;
    }
};

inline constexpr std::string_view csv_header =
    "experiment,scheme,scenario,n,m,payload_bytes,pairings,group_adds,scalar_muls,seals,wraps,wall_ns";

using Progress = std::function<void(const std::string&)>;

/// Runs every point through a scratch registry; returns
/// |points| x |schemes| x repetitions records. Vendor setup, board
/// enrollment and cluster formation happen outside the timed region.
[[nodiscard]] std::vector<TrialRecord> run_experiment(const ExperimentPlan& plan, const Progress& progress = {});

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);
/// Throws ErrorCode::invalid_encoding on a wrong header or malformed row.
[[nodiscard]] std::vector<TrialRecord> parse_csv(std::istream& in);

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

/// Ordinary least squares. Throws ErrorCode::insufficient_data for fewer
/// than two distinct x values.
[[nodiscard]] LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

[[nodiscard]] double median(std::vector<double> values);

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Report {
    std::vector<Check> checks;

    [[nodiscard]] bool passed() const noexcept;
    [[nodiscard]] std::string to_text() const;
};

/// Exact operation-count checks on every row, then per experiment:
///   1 and 4: slope of AgEncID median time against n is below 10% of the
///            baseline's, which is positive with R^2 >= 0.9 against its
///            operation count; needs five or more sweep points and five or
///            more repetitions per point.
///   3: at the largest payload the baseline seals at least 4x the bytes and
///      takes at least 4x the median time.
/// Throws ErrorCode::insufficient_data when a timing check lacks data.
[[nodiscard]] Report fit_and_assert(const std::vector<TrialRecord>& records);

/// One SVG per experiment and scenario: median wall time against n (or
/// payload size for experiment 3), one line per scheme. Returns the files.
std::vector<std::filesystem::path> write_plots(const std::vector<TrialRecord>& records,
                                               const std::filesystem::path& dir);

}  // namespace agencid::bench
