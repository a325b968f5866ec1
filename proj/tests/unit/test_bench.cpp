#include "agencid/bench/experiment.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace agencid;
using namespace agencid::bench;
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

// Experiment-4 style rows with exact counts and wall time given by `time`.
std::vector<TrialRecord> synthetic(std::uint32_t points, unsigned reps,
                                   const std::function<std::uint64_t(Scheme, std::uint32_t, unsigned)>& time)
{
    std::vector<TrialRecord> out;
    for (std::uint32_t n = 1; n <= points; ++n) {
        for (unsigned r = 0; r < reps; ++r) {
            for (auto s : {Scheme::agencid, Scheme::ieid}) {
                TrialRecord t;
                t.experiment = 4;
                t.scheme = s;
                t.scenario = 1;
                t.n = n;
                t.m = 1;
                t.payload_bytes = 32;
                t.seals = s == Scheme::agencid ? 1 : n;
                t.wraps = s == Scheme::agencid ? 1 : n;
                t.scalar_muls = s == Scheme::agencid ? 2 : 0;
                t.wall_ns = time(s, n, r);
                out.push_back(t);
            }
        }
    }
    return out;
}

}  // namespace

TEST(Fit, LeastSquares)
{
    const auto f = least_squares({1, 2, 3, 4}, {3, 5, 7, 9});
    EXPECT_DOUBLE_EQ(f.slope, 2);
    EXPECT_DOUBLE_EQ(f.intercept, 1);
    EXPECT_DOUBLE_EQ(f.r_squared, 1);
    const auto flat = least_squares({1, 2, 3}, {4, 4, 4});
    EXPECT_DOUBLE_EQ(flat.slope, 0);
    EXPECT_EQ(code_of([] { (void)least_squares({1, 1}, {2, 3}); }), ErrorCode::insufficient_data);
    EXPECT_DOUBLE_EQ(median({5, 1, 3}), 3);
    EXPECT_DOUBLE_EQ(median({4, 1, 3, 2}), 2.5);
}

TEST(Fit, ConstantAgEncIDPasses)
{
    const auto rows = synthetic(10, 5, [](Scheme s, std::uint32_t n, unsigned r) -> std::uint64_t {
        return s == Scheme::agencid ? 1000 : 1000 * n + r;
    });
    const auto report = fit_and_assert(rows);
    EXPECT_TRUE(report.passed()) << report.to_text();
}

TEST(Fit, LinearAgEncIDFails)
{
    const auto rows = synthetic(10, 5, [](Scheme, std::uint32_t n, unsigned) -> std::uint64_t { return 1000 * n; });
    const auto report = fit_and_assert(rows);
    EXPECT_FALSE(report.passed());
    bool slope_failed = false;
    for (const auto& c : report.checks) {
        if (c.name.find("time slope") != std::string::npos) slope_failed = !c.passed;
    }
    EXPECT_TRUE(slope_failed) << report.to_text();
}

TEST(Fit, FlatBaselineFails)
{
    const auto rows = synthetic(10, 5, [](Scheme, std::uint32_t, unsigned) -> std::uint64_t { return 1000; });
    EXPECT_FALSE(fit_and_assert(rows).passed());
}

TEST(Fit, WrongCountsFail)
{
    auto rows = synthetic(6, 5, [](Scheme s, std::uint32_t n, unsigned) -> std::uint64_t {
        return s == Scheme::agencid ? 1000 : 1000 * n;
    });
    rows[0].pairings = 1;
    EXPECT_FALSE(fit_and_assert(rows).passed());
}

TEST(Fit, InsufficientData)
{
    const auto few_points = synthetic(4, 5, [](Scheme, std::uint32_t n, unsigned) -> std::uint64_t { return n; });
    EXPECT_EQ(code_of([&] { (void)fit_and_assert(few_points); }), ErrorCode::insufficient_data);
    const auto few_reps = synthetic(8, 4, [](Scheme, std::uint32_t n, unsigned) -> std::uint64_t { return n; });
    EXPECT_EQ(code_of([&] { (void)fit_and_assert(few_reps); }), ErrorCode::insufficient_data);
    EXPECT_EQ(code_of([] { (void)fit_and_assert({}); }), ErrorCode::insufficient_data);
}

TEST(Csv, RoundTripAndStrictHeader)
{
    const auto rows = synthetic(3, 1, [](Scheme, std::uint32_t n, unsigned) -> std::uint64_t { return 7 * n; });
    std::stringstream ss;
    write_csv(ss, rows);
    EXPECT_EQ(ss.str().substr(0, csv_header.size()), csv_header);
    EXPECT_EQ(parse_csv(ss), rows);

    std::stringstream bad_header("experiment,scheme\n1,IEID\n");
    EXPECT_EQ(code_of([&] { (void)parse_csv(bad_header); }), ErrorCode::invalid_encoding);
    std::stringstream bad_row(std::string(csv_header) + "\n1,IEID,1,1,1,32,0,0,0,1,1,-5\n");
    EXPECT_EQ(code_of([&] { (void)parse_csv(bad_row); }), ErrorCode::invalid_encoding);
    std::stringstream bad_scheme(std::string(csv_header) + "\n1,XYZ,1,1,1,32,0,0,0,1,1,5\n");
    EXPECT_EQ(code_of([&] { (void)parse_csv(bad_scheme); }), ErrorCode::invalid_encoding);
}

TEST(Plan, StandardPlans)
{
    EXPECT_EQ(ExperimentPlan::standard(1).points.size(), 20u);
    const auto p2 = ExperimentPlan::standard(2);
    ASSERT_EQ(p2.points.size(), 1u);
    EXPECT_EQ(p2.points[0].family_sizes, (std::vector<std::uint32_t>{3, 3, 4}));
    EXPECT_EQ(p2.points[0].n(), 10u);
    EXPECT_EQ(ExperimentPlan::standard(3).points.size(), 3u);
    const auto p4 = ExperimentPlan::standard(4);
    EXPECT_EQ(p4.points.size(), 38u);
    for (const auto& p : p4.points) {
        if (p.scenario == 2) {
            EXPECT_EQ(p.m(), 3u);
            EXPECT_LE(p.family_sizes.back() - p.family_sizes.front(), 1u);
        }
    }
    EXPECT_EQ(p4.timed_phase(), "key");
    EXPECT_EQ(code_of([] { (void)ExperimentPlan::standard(5); }), ErrorCode::invalid_argument);
    auto bad = ExperimentPlan::standard(1);
    bad.points[0].family_sizes = {0};
    EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::invalid_argument);
}

TEST(Run, RowCountAndExactCounts)
{
    auto plan = ExperimentPlan::standard(2, 2);
    plan.engine = pairing::EngineConfig::symbolic(2305843009213693951ULL);
    plan.warmup = 0;
    const auto rows = run_experiment(plan);
    ASSERT_EQ(rows.size(), 1u * 2u * 2u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.n, 10u);
        EXPECT_EQ(r.m, 3u);
        if (r.scheme == Scheme::agencid) {
            EXPECT_EQ(r.seals, 3u);
            EXPECT_EQ(r.wraps, 1u);
            EXPECT_EQ(r.key_generations, 1u);
            EXPECT_EQ(r.pairings, 0u);
        } else {
            EXPECT_EQ(r.seals, 10u);
            EXPECT_EQ(r.wraps, 10u);
            EXPECT_EQ(r.key_generations, 10u);
        }
    }
    EXPECT_TRUE(fit_and_assert(rows).passed());
}

TEST(Run, PlotsAreWritten)
{
    auto plan = ExperimentPlan::standard(1, 1);
    plan.points.resize(3);
    plan.engine = pairing::EngineConfig::symbolic(2305843009213693951ULL);
    plan.warmup = 0;
    const auto rows = run_experiment(plan);
    EXPECT_EQ(rows.size(), 3u * 2u);
    const auto dir = fs::temp_directory_path() / "agencid-plot-test";
    const auto files = write_plots(rows, dir);
    ASSERT_EQ(files.size(), 1u);
    EXPECT_GT(fs::file_size(files[0]), 200u);
    fs::remove_all(dir);
}
