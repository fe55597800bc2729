#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tempoca/bench.hpp"

using namespace tempoca;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("tempoca_bench_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

bool same_scores(const std::vector<BenchRow>& a, const std::vector<BenchRow>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (detail::row_key(a[i]) != detail::row_key(b[i])) return false;
        if (a[i].failed != b[i].failed) return false;
        if (!a[i].failed &&
            (a[i].precision != b[i].precision || a[i].recall != b[i].recall ||
             a[i].f1 != b[i].f1))
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("f1 aggregation conventions", "[bench]") {
    auto [m0, s0] = f1_mean_std({});
    CHECK(std::isnan(m0));
    CHECK(std::isnan(s0));

    BenchRow one;
    one.f1 = 0.75;
    auto [m1, s1] = f1_mean_std({one});
    CHECK(m1 == 0.75);
    CHECK(s1 == 0.0);

    BenchRow two = one, bad = one;
    two.f1 = 0.25;
    bad.failed = true;
    bad.f1 = std::nan("");
    auto [m2, s2] = f1_mean_std({one, two, bad});
    CHECK(m2 == Catch::Approx(0.5));
    CHECK(s2 == Catch::Approx(std::sqrt(0.125)));
}

TEST_CASE("sweep writes canonical results and derived files", "[bench]") {
    TempDir dir("sweep");
    BenchConfig cfg;
    cfg.grid = {{"fork"}, {250, 400}, {1, 2}};
    cfg.out_dir = dir.str();
    const std::vector<BenchRow> rows = run_bench(cfg);

    REQUIRE(rows.size() == 2 * 2 * 2);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(detail::row_key(rows[i - 1]) < detail::row_key(rows[i]));
    for (const BenchRow& r : rows) {
        CHECK_FALSE(r.failed);
        CHECK(r.f1 >= 0.0);
        CHECK(r.f1 <= 1.0);
        CHECK(r.wall_ms > 0.0);
    }

    const std::vector<BenchRow> reread = detail::read_results_csv(dir.str() + "/results.csv");
    CHECK(same_scores(rows, reread));

    // aggregates reproduce the group statistics exactly
    std::ifstream agg(dir.str() + "/aggregates.csv");
    REQUIRE(agg);
    std::string line;
    std::getline(agg, line);
    CHECK(line == "structure,n,method,mean_f1,std_f1");
    std::size_t groups = 0;
    while (std::getline(agg, line)) {
        const auto f = detail::split_csv_line(line);
        REQUIRE(f.size() == 5);
        std::vector<BenchRow> group;
        for (const BenchRow& r : rows)
            if (r.structure == f[0] && r.n == std::stoull(f[1]) && r.method == f[2])
                group.push_back(r);
        const auto [mean, sd] = f1_mean_std(group);
        CHECK(std::stod(f[3]) == Catch::Approx(mean).margin(1e-12));
        CHECK(std::stod(f[4]) == Catch::Approx(sd).margin(1e-12));
        ++groups;
    }
    CHECK(groups == 4); // 2 sizes x 2 methods

    CHECK(fs::exists(dir.str() + "/plot_fork_pc_pmime.csv"));
    CHECK(fs::exists(dir.str() + "/plot_fork_pwgc.csv"));
    const std::string plot = slurp(dir.str() + "/plot_fork_pc_pmime.csv");
    CHECK(plot.rfind("n,mean_f1,std_f1\n", 0) == 0);
}

TEST_CASE("interrupted sweeps resume without recomputing", "[bench]") {
    TempDir dir("resume");
    BenchConfig cfg;
    cfg.grid = {{"v_structure"}, {250}, {1, 2}};
    cfg.out_dir = dir.str();
    run_bench(cfg);

    // keep only the first two rows, with a sentinel wall time
    std::vector<BenchRow> kept = detail::read_results_csv(dir.str() + "/results.csv");
    REQUIRE(kept.size() == 4);
    kept.resize(2);
    kept[0].wall_ms = 123456.0;
    {
        std::ofstream os(dir.str() + "/results.csv", std::ios::trunc);
        os << detail::results_header << '\n';
        for (const BenchRow& r : kept) detail::write_row(os, r);
    }

    const std::vector<BenchRow> rows = run_bench(cfg);
    REQUIRE(rows.size() == 4);
    bool sentinel_survived = false;
    for (const BenchRow& r : rows)
        if (r.wall_ms == 123456.0) sentinel_survived = true;
    CHECK(sentinel_survived);
}

TEST_CASE("cells that cannot run are recorded as failures", "[bench]") {
    TempDir dir("fail");
    BenchConfig cfg;
    cfg.grid = {{"fork"}, {5}, {1}};
    cfg.out_dir = dir.str();
    const std::vector<BenchRow> rows = run_bench(cfg);
    REQUIRE(rows.size() == 2);
    for (const BenchRow& r : rows) CHECK(r.failed);
    const std::string text = slurp(dir.str() + "/results.csv");
    CHECK(text.find("nan,nan,nan") != std::string::npos);

    // failed rows are remembered, not retried
    const std::vector<BenchRow> again = run_bench(cfg);
    REQUIRE(again.size() == 2);
    for (const BenchRow& r : again) CHECK(r.failed);
}

TEST_CASE("an empty grid is a no-op", "[bench]") {
    TempDir dir("empty");
    BenchConfig cfg;
    cfg.grid = {{"fork"}, {250}, {}};
    cfg.out_dir = dir.str();
    CHECK(run_bench(cfg).empty());
    CHECK(slurp(dir.str() + "/results.csv") == std::string(detail::results_header) + "\n");
}

TEST_CASE("parallel execution changes nothing but the clock", "[bench]") {
    TempDir d1("serial"), d2("parallel");
    BenchConfig cfg;
    cfg.grid = {{"mediator"}, {250}, {1, 2}};
    cfg.out_dir = d1.str();
    const std::vector<BenchRow> serial = run_bench(cfg);
    cfg.out_dir = d2.str();
    cfg.jobs = 3;
    const std::vector<BenchRow> parallel = run_bench(cfg);
    CHECK(same_scores(serial, parallel));
}

TEST_CASE("malformed results files are rejected", "[bench]") {
    TempDir dir("bad");
    {
        std::ofstream os(dir.str() + "/results.csv");
        os << "wrong,header\n";
    }
    CHECK_THROWS_AS(detail::read_results_csv(dir.str() + "/results.csv"), Error);
    {
        std::ofstream os(dir.str() + "/results.csv", std::ios::trunc);
        os << detail::results_header << "\nfork,250,1,pwgc,0.5,0.5\n";
    }
    CHECK_THROWS_AS(detail::read_results_csv(dir.str() + "/results.csv"), Error);
    CHECK(detail::read_results_csv(dir.str() + "/missing.csv").empty());
}
