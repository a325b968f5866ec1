#include "agencid/bench/experiment.hpp"

#include "agencid/ieid/ieid.hpp"
#include "agencid/rng.hpp"
#include "agencid/workflow/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace agencid::bench {

namespace fs = std::filesystem;

std::string_view to_string(Scheme s) noexcept
{
    return s == Scheme::agencid ? "AgEncID" : "IEID";
}

Scheme scheme_from_string(std::string_view s)
{
    if (s == "AgEncID") return Scheme::agencid;
    if (s == "IEID") return Scheme::ieid;
    throw Error(ErrorCode::invalid_encoding, "unknown scheme '" + std::string(s) + "'");
}

std::uint32_t SweepPoint::n() const noexcept
{
    return std::accumulate(family_sizes.begin(), family_sizes.end(), std::uint32_t{0});
}

ExperimentPlan ExperimentPlan::standard(int experiment, unsigned repetitions)
{
    constexpr std::size_t kib = 1024;
    ExperimentPlan plan;
    plan.experiment = experiment;
    plan.repetitions = repetitions;
    switch (experiment) {
    case 1:
        for (std::uint32_t n = 1; n <= 20; ++n) plan.points.push_back({1, {n}, 64 * kib});
        break;
    case 2:
        plan.points.push_back({2, {3, 3, 4}, 64 * kib});
        break;
    case 3:
        for (std::size_t bytes : {kib, 64 * kib, 1024 * kib}) plan.points.push_back({1, {5}, bytes});
        break;
    case 4:
        for (std::uint32_t n = 1; n <= 20; ++n) plan.points.push_back({1, {n}, 32});
        for (std::uint32_t n = 3; n <= 20; ++n) {
            std::vector<std::uint32_t> sizes;
            for (std::uint32_t f = 0; f < 3; ++f) sizes.push_back(n / 3 + (f >= 3 - n % 3 ? 1 : 0));
            plan.points.push_back({2, sizes, 32});
        }
        break;
    default:
        throw Error(ErrorCode::invalid_argument, "experiment must be 1, 2, 3 or 4");
    }
    return plan;
}

void ExperimentPlan::validate() const
{
    if (experiment < 1 || experiment > 4) throw Error(ErrorCode::invalid_argument, "experiment must be 1-4");
    if (points.empty()) throw Error(ErrorCode::invalid_argument, "plan has no sweep points");
    if (schemes.empty()) throw Error(ErrorCode::invalid_argument, "plan has no schemes");
    if (repetitions == 0) throw Error(ErrorCode::invalid_argument, "repetitions must be positive");
    for (const auto& p : points) {
        if (p.family_sizes.empty()
            || std::any_of(p.family_sizes.begin(), p.family_sizes.end(), [](auto s) { return s == 0; })) {
            throw Error(ErrorCode::invalid_argument, "every family needs at least one board");
        }
        const int expected = p.m() > 1 ? 2 : 1;
        if (p.scenario != expected) {
            throw Error(ErrorCode::invalid_argument, "sweep point scenario does not match its family count");
        }
    }
}

std::string_view ExperimentPlan::timed_phase() const noexcept
{
    return experiment == 4 ? "key" : "seal";
}

// ---- running ---------------------------------------------------------------

namespace {

class ScratchDir {
public:
    // Named from system entropy: the seeded stream must not decide where concurrent runs land.
    ScratchDir()
        : path_(fs::temp_directory_path() / ("agencid-bench-" + to_hex(Rng::system().bytes(8))))
    {
        fs::create_directories(path_);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    ~ScratchDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    [[nodiscard]] const fs::path& path() const noexcept { return path_; }

private:
    fs::path path_;
};

std::string family_name(std::size_t f) { return "F" + std::to_string(f + 1); }

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentPlan& plan, const Progress& progress)
{
    plan.validate();
    auto rng = Rng::seeded(plan.seed);
    ScratchDir scratch;
    auto registry = workflow::Registry::open(scratch.path());
    workflow::Workflow wf(registry, rng, "bench", 1000);
    const ieid::X25519Wrapper wrapper;

    // Enough boards of each family for the largest point.
    std::vector<std::uint32_t> per_family;
    for (const auto& p : plan.points) {
        if (per_family.size() < p.family_sizes.size()) per_family.resize(p.family_sizes.size(), 0);
        for (std::size_t f = 0; f < p.family_sizes.size(); ++f) {
            per_family[f] = std::max(per_family[f], p.family_sizes[f]);
        }
    }
    const auto capacity = std::accumulate(per_family.begin(), per_family.end(), std::uint32_t{0});
    if (progress) progress("provisioning vendor with " + std::to_string(capacity) + " boards");
    const auto vendor = wf.vendor_init("fv", capacity, plan.engine);
    std::vector<std::vector<std::string>> boards(per_family.size());
    for (std::size_t f = 0; f < per_family.size(); ++f) {
        for (std::uint32_t k = 0; k < per_family[f]; ++k) {
            auto id = family_name(f) + "-" + std::to_string(k + 1);
            (void)wf.register_board("fv", id, family_name(f));
            boards[f].push_back(id);
        }
    }
    const auto engine = wf.engine_for(vendor);

    struct Prepared {
        std::string cluster_id;
        std::map<std::string, Bytes> payloads;
        std::vector<std::vector<ieid::BoardPublicKey>> ieid_boards;
    };
    std::vector<Prepared> prepared;
    for (std::size_t k = 0; k < plan.points.size(); ++k) {
        const auto& point = plan.points[k];
        Prepared p;
        p.cluster_id = "p" + std::to_string(k + 1);
        p.ieid_boards.resize(point.family_sizes.size());
        std::vector<std::string> members;
        std::uint32_t next_index = 1;
        for (std::size_t f = 0; f < point.family_sizes.size(); ++f) {
            members.insert(members.end(), boards[f].begin(), boards[f].begin() + point.family_sizes[f]);
            p.payloads.emplace(family_name(f), rng.bytes(point.payload_bytes));
            for (std::uint32_t b = 0; b < point.family_sizes[f]; ++b) {
                p.ieid_boards[f].push_back(wrapper.generate(next_index++, rng).public_part());
            }
        }
        (void)wf.form_cluster(p.cluster_id, members, point.scenario);
        prepared.push_back(std::move(p));
    }

    const bool key_phase = plan.timed_phase() == "key";
    auto run = [&](std::size_t k, Scheme scheme) {
        const auto& point = plan.points[k];
        const auto& p = prepared[k];
        TrialRecord r;
        r.experiment = plan.experiment;
        r.scheme = scheme;
        r.scenario = point.scenario;
        r.n = point.n();
        r.m = point.m();
        r.payload_bytes = point.payload_bytes;
        if (scheme == Scheme::agencid) {
            const auto before = engine->op_counts();
            const auto result = wf.ipp_encrypt(p.cluster_id, p.payloads, "bench");
            const auto ops = engine->op_counts() - before;
            r.pairings = ops.pairings;
            r.group_adds = ops.source_adds;
            r.scalar_muls = ops.scalar_muls;
            r.seals = result.tally.seals;
            r.wraps = result.tally.key_encryptions;
            r.key_generations = result.tally.key_generations;
            r.wall_ns = key_phase ? result.tally.key_ns : result.tally.seal_ns;
        } else {
            ieid::IeidTally tally;
            for (std::size_t f = 0; f < p.ieid_boards.size(); ++f) {
                const auto batch = ieid::encrypt_all(wrapper, p.ieid_boards[f], p.payloads.at(family_name(f)),
                                                     p.cluster_id, "bench", rng);
                tally.key_generations += batch.tally.key_generations;
                tally.seals += batch.tally.seals;
                tally.wraps += batch.tally.wraps;
                tally.key_ns += batch.tally.key_ns;
                tally.seal_ns += batch.tally.seal_ns;
            }
            r.seals = tally.seals;
            r.wraps = tally.wraps;
            r.key_generations = tally.key_generations;
            r.wall_ns = key_phase ? tally.key_ns : tally.seal_ns;
        }
        return r;
    };

    for (unsigned w = 0; w < plan.warmup; ++w) {
        for (std::size_t k = 0; k < plan.points.size(); ++k) {
            for (auto s : plan.schemes) (void)run(k, s);
        }
    }

    // Each repetition visits the points in a fresh random order and
    // alternates scheme order, so slow drift in machine speed spreads over
    // all n instead of lining up with it.
    std::vector<std::vector<TrialRecord>> by_point(plan.points.size());
    std::vector<std::size_t> order(plan.points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 shuffler(plan.seed);
    for (unsigned rep = 0; rep < plan.repetitions; ++rep) {
        if (progress) {
            progress("repetition " + std::to_string(rep + 1) + "/" + std::to_string(plan.repetitions));
        }
        std::shuffle(order.begin(), order.end(), shuffler);
        for (std::size_t j = 0; j < order.size(); ++j) {
            const auto k = order[j];
            if ((rep + j) % 2 == 0) {
                for (auto it = plan.schemes.begin(); it != plan.schemes.end(); ++it) by_point[k].push_back(run(k, *it));
            } else {
                for (auto it = plan.schemes.rbegin(); it != plan.schemes.rend(); ++it) by_point[k].push_back(run(k, *it));
            }
        }
    }
    std::vector<TrialRecord> records;
    for (auto& rows : by_point) records.insert(records.end(), rows.begin(), rows.end());
    return records;
}

// ---- CSV -------------------------------------------------------------------

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records)
{
    out << csv_header << '\n';
    for (const auto& r : records) {
        out << r.experiment << ',' << to_string(r.scheme) << ',' << r.scenario << ',' << r.n << ',' << r.m << ','
            << r.payload_bytes << ',' << r.pairings << ',' << r.group_adds << ',' << r.scalar_muls << ',' << r.seals
            << ',' << r.wraps << ',' << r.wall_ns << '\n';
    }
}

namespace {

std::uint64_t parse_u64(const std::string& field, std::size_t line)
{
    if (field.empty() || !std::all_of(field.begin(), field.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw Error(ErrorCode::invalid_encoding,
                    "line " + std::to_string(line) + ": '" + field + "' is not a non-negative integer");
    }
    try {
        return std::stoull(field);
    } catch (const std::out_of_range&) {
        throw Error(ErrorCode::invalid_encoding, "line " + std::to_string(line) + ": value out of range");
    }
}

}  // namespace

std::vector<TrialRecord> parse_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::invalid_encoding, "empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header) throw Error(ErrorCode::invalid_encoding, "unexpected CSV header: " + line);

    std::vector<TrialRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 12) {
            throw Error(ErrorCode::invalid_encoding, "line " + std::to_string(line_no) + ": expected 12 fields");
        }
        TrialRecord r;
        r.experiment = static_cast<int>(parse_u64(f[0], line_no));
        r.scheme = scheme_from_string(f[1]);
        r.scenario = static_cast<int>(parse_u64(f[2], line_no));
        r.n = static_cast<std::uint32_t>(parse_u64(f[3], line_no));
        r.m = static_cast<std::uint32_t>(parse_u64(f[4], line_no));
        r.payload_bytes = parse_u64(f[5], line_no);
        r.pairings = parse_u64(f[6], line_no);
        r.group_adds = parse_u64(f[7], line_no);
        r.scalar_muls = parse_u64(f[8], line_no);
        r.seals = parse_u64(f[9], line_no);
        r.wraps = parse_u64(f[10], line_no);
        r.wall_ns = parse_u64(f[11], line_no);
        out.push_back(r);
    }
    return out;
}

// ---- fitting ---------------------------------------------------------------

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) throw Error(ErrorCode::invalid_argument, "x and y differ in length");
    if (std::set<double>(x.begin(), x.end()).size() < 2) {
        throw Error(ErrorCode::insufficient_data, "a line needs at least two distinct x values");
    }
    const double k = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r_squared = syy == 0 ? (ss_res == 0 ? 1.0 : 0.0) : 1.0 - ss_res / syy;
    return fit;
}

double median(std::vector<double> values)
{
    if (values.empty()) throw Error(ErrorCode::insufficient_data, "median of nothing");
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2;
}

bool Report::passed() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string Report::to_text() const
{
    std::ostringstream out;
    out << "# energy is not measured; operation counts stand in for it\n";
    for (const auto& c : checks) out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    out << (passed() ? "ALL PASS" : "FAILED") << '\n';
    return out.str();
}

namespace {

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

std::string group_name(int experiment, int scenario)
{
    return "experiment " + std::to_string(experiment) + " scenario " + std::to_string(scenario);
}

using Key = std::pair<int, int>;  // experiment, scenario

void count_checks(const std::vector<TrialRecord>& records, Report& report)
{
    std::map<std::pair<Key, Scheme>, std::pair<std::size_t, std::string>> failures;
    std::map<std::pair<Key, Scheme>, std::size_t> rows;
    for (const auto& r : records) {
        const auto key = std::make_pair(Key{r.experiment, r.scenario}, r.scheme);
        ++rows[key];
        std::string bad;
        if (r.scheme == Scheme::agencid) {
            if (r.pairings != 0) bad = "pairings=" + std::to_string(r.pairings);
            else if (r.wraps != 1) bad = "key encryptions=" + std::to_string(r.wraps);
            else if (r.seals != r.m) bad = "seals=" + std::to_string(r.seals) + " m=" + std::to_string(r.m);
        } else {
            if (r.pairings != 0 || r.group_adds != 0 || r.scalar_muls != 0) bad = "group operations in baseline";
            else if (r.wraps != r.n) bad = "wraps=" + std::to_string(r.wraps) + " n=" + std::to_string(r.n);
            else if (r.seals != r.n) bad = "seals=" + std::to_string(r.seals) + " n=" + std::to_string(r.n);
        }
        if (!bad.empty()) {
            auto& f = failures[key];
            if (f.first++ == 0) f.second = "n=" + std::to_string(r.n) + ": " + bad;
        }
    }
    for (const auto& [key, count] : rows) {
        const auto& [group, scheme] = key;
        Check c;
        c.name = group_name(group.first, group.second) + " " + std::string(to_string(scheme)) + " op counts";
        auto it = failures.find(key);
        c.passed = it == failures.end();
        c.detail = c.passed ? std::to_string(count) + " rows exact ("
                                  + (scheme == Scheme::agencid ? "0 pairings, 1 key encryption, m seals"
                                                               : "n wraps, n seals")
                                  + ")"
                            : std::to_string(it->second.first) + " bad rows, first " + it->second.second;
        report.checks.push_back(std::move(c));
    }
}

std::map<double, std::vector<double>> times_by(const std::vector<TrialRecord>& rows, Scheme scheme, bool by_payload)
{
    std::map<double, std::vector<double>> out;
    for (const auto& r : rows) {
        if (r.scheme != scheme) continue;
        out[by_payload ? static_cast<double>(r.payload_bytes) : r.n].push_back(static_cast<double>(r.wall_ns));
    }
    return out;
}

void require_repetitions(const std::map<double, std::vector<double>>& series, const std::string& what)
{
    for (const auto& [x, ys] : series) {
        if (ys.size() < 5) {
            throw Error(ErrorCode::insufficient_data, what + ": " + std::to_string(ys.size())
                                                          + " repetitions at one point, timing checks need 5");
        }
    }
}

void slope_check(int experiment, int scenario, const std::vector<TrialRecord>& rows, Report& report)
{
    const auto name = group_name(experiment, scenario);
    const auto a = times_by(rows, Scheme::agencid, false);
    const auto b = times_by(rows, Scheme::ieid, false);
    if (a.size() < 5 || b.size() < 5) {
        throw Error(ErrorCode::insufficient_data, name + ": slope checks need at least 5 sweep points");
    }
    require_repetitions(a, name);
    require_repetitions(b, name);

    std::vector<double> ax, ay, bx, by, bops;
    for (const auto& [n, ys] : a) {
        ax.push_back(n);
        ay.push_back(median(ys));
    }
    std::map<double, double> ops_at;
    for (const auto& r : rows) {
        if (r.scheme == Scheme::ieid) ops_at[r.n] = static_cast<double>(experiment == 4 ? r.wraps : r.seals);
    }
    for (const auto& [n, ys] : b) {
        bx.push_back(n);
        by.push_back(median(ys));
        bops.push_back(ops_at[n]);
    }
    const auto fa = least_squares(ax, ay);
    const auto fb = least_squares(bx, by);
    const auto fops = least_squares(bops, by);

    Check c;
    c.name = name + " time slope";
    c.passed = fb.slope > 0 && std::abs(fa.slope) < 0.1 * fb.slope && fops.r_squared >= 0.9;
    c.detail = "AgEncID " + fmt(fa.slope) + " ns/board, IEID " + fmt(fb.slope) + " ns/board (ratio "
               + fmt(fb.slope != 0 ? std::abs(fa.slope) / fb.slope : INFINITY) + ", limit 0.1), IEID R^2 "
               + fmt(fops.r_squared) + " against op count (limit 0.9), " + std::to_string(a.size()) + " points";
    report.checks.push_back(std::move(c));
}

void volume_check(const std::vector<TrialRecord>& rows, Report& report)
{
    std::size_t largest = 0;
    for (const auto& r : rows) largest = std::max(largest, r.payload_bytes);
    std::vector<TrialRecord> top;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(top),
                 [&](const TrialRecord& r) { return r.payload_bytes == largest; });
    const auto a = times_by(top, Scheme::agencid, true);
    const auto b = times_by(top, Scheme::ieid, true);
    if (a.empty() || b.empty()) throw Error(ErrorCode::insufficient_data, "experiment 3 needs both schemes");
    require_repetitions(a, "experiment 3");
    require_repetitions(b, "experiment 3");

    auto sealed_bytes = [&](Scheme s) {
        for (const auto& r : top) {
            if (r.scheme == s) return static_cast<double>(r.seals * r.payload_bytes);
        }
        return 0.0;
    };
    const double bytes_ratio = sealed_bytes(Scheme::ieid) / sealed_bytes(Scheme::agencid);
    const double time_ratio = median(b.begin()->second) / median(a.begin()->second);

    Check c;
    c.name = "experiment 3 payload volume at " + std::to_string(largest) + " bytes";
    c.passed = bytes_ratio >= 4 && time_ratio >= 4;
    c.detail = "IEID/AgEncID sealed bytes " + fmt(bytes_ratio) + "x, median seal time " + fmt(time_ratio)
               + "x (limit 4x each)";
    report.checks.push_back(std::move(c));
}

}  // namespace

Report fit_and_assert(const std::vector<TrialRecord>& records)
{
    if (records.empty()) throw Error(ErrorCode::insufficient_data, "no trial records");
    Report report;
    count_checks(records, report);

    std::map<Key, std::vector<TrialRecord>> groups;
    for (const auto& r : records) groups[{r.experiment, r.scenario}].push_back(r);
    for (const auto& [key, rows] : groups) {
        const auto [experiment, scenario] = key;
        if (experiment == 1 || experiment == 4) {
            slope_check(experiment, scenario, rows, report);
        } else if (experiment == 3) {
            volume_check(rows, report);
        }
    }
    return report;
}

// ---- plots -----------------------------------------------------------------

std::vector<fs::path> write_plots(const std::vector<TrialRecord>& records, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io_failure, "cannot create " + dir.string() + ": " + ec.message());

    std::map<Key, std::vector<TrialRecord>> groups;
    for (const auto& r : records) groups[{r.experiment, r.scenario}].push_back(r);

    std::vector<fs::path> written;
    for (const auto& [key, rows] : groups) {
        const bool by_payload = key.first == 3;
        std::map<Scheme, std::vector<std::pair<double, double>>> series;
        double xmax = 0, ymax = 0;
        for (auto s : {Scheme::agencid, Scheme::ieid}) {
            for (const auto& [x, ys] : times_by(rows, s, by_payload)) {
                const double y = median(ys) / 1e3;
                series[s].emplace_back(x, y);
                xmax = std::max(xmax, x);
                ymax = std::max(ymax, y);
            }
        }
        if (xmax <= 0) xmax = 1;
        if (ymax <= 0) ymax = 1;

        constexpr double w = 640, h = 400, left = 70, right = 20, top = 40, bottom = 50;
        auto px = [&](double x) { return left + (w - left - right) * (by_payload ? std::log2(std::max(x, 1.0)) / std::log2(std::max(xmax, 2.0)) : x / xmax); };
        auto py = [&](double y) { return h - bottom - (h - top - bottom) * y / ymax; };

        std::ostringstream svg;
        svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << w << R"(" height=")" << h << R"(">)" << '\n';
        svg << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
        svg << R"(<text x=")" << left << R"(" y="24" font-family="sans-serif" font-size="14">)"
            << group_name(key.first, key.second) << " (median " << (key.first == 4 ? "key" : "seal")
            << " phase, microseconds)</text>\n";
        svg << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << w - right << "\" y2=\"" << py(0)
            << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << left << "\" y2=\"" << top
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << (w / 2) << "\" y=\"" << h - 12 << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << (by_payload ? "payload bytes (log scale)" : "boards n") << " (max " << fmt(xmax) << ")</text>\n";
        svg << "<text x=\"4\" y=\"" << top + 10 << "\" font-family=\"sans-serif\" font-size=\"12\">" << fmt(ymax)
            << "</text>\n";
        int legend = 0;
        for (const auto& [scheme, pts] : series) {
            const char* colour = scheme == Scheme::agencid ? "#1f77b4" : "#d62728";
            svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
            for (const auto& [x, y] : pts) svg << px(x) << ',' << py(y) << ' ';
            svg << "\"/>\n";
            svg << "<text x=\"" << w - 140 << "\" y=\"" << top + 16 * legend++ << "\" fill=\"" << colour
                << "\" font-family=\"sans-serif\" font-size=\"12\">" << to_string(scheme) << "</text>\n";
        }
        svg << "</svg>\n";

        const auto path = dir / ("experiment" + std::to_string(key.first) + "_scenario" + std::to_string(key.second)
                                 + ".svg");
        std::ofstream out(path);
        out << svg.str();
        if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
        written.push_back(path);
    }
    return written;
}

}  // namespace agencid::bench
