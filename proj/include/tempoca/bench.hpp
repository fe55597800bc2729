#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "tempoca/error.hpp"
#include "tempoca/granger.hpp"
#include "tempoca/pc_pmime.hpp"
#include "tempoca/score.hpp"
#include "tempoca/simulate.hpp"

namespace tempoca {

struct BenchGrid {
    std::vector<std::string> kinds;
    std::vector<std::size_t> ns;
    std::vector<std::uint64_t> seeds;
};

struct BenchConfig {
    BenchGrid grid;
    DiscoveryParams params;
    GrangerOptions granger;
    // generator coefficients shared by every cell
    double self_coef = 0.5;
    double cross_coef = 0.8;
    double noise_sd = 0.4;
    std::size_t burn_in = 1000;
    std::string out_dir;
    int jobs = 1;

    // progress hook, called once per finished cell under the writer lock
    std::function<void(const struct BenchRow&)> on_row;
};

struct BenchRow {
    std::string structure;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string method;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double wall_ms = 0.0;
    bool failed = false;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void write_row(std::ostream& os, const BenchRow& r) {
    os << r.structure << ',' << r.n << ',' << r.seed << ',' << r.method << ',';
    if (r.failed) {
        os << "nan,nan,nan,";
    } else {
        os << format_double(r.precision) << ',' << format_double(r.recall) << ','
           << format_double(r.f1) << ',';
    }
    os << format_double(r.wall_ms) << '\n';
}

inline constexpr const char* results_header = "structure,n,seed,method,precision,recall,f1,wall_time_ms";

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline double parse_result_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorKind::ParseError, "bad number '" + s + "' in results file");
    return v;
}

inline std::vector<BenchRow> read_results_csv(const std::string& path) {
    std::vector<BenchRow> rows;
    std::ifstream is(path);
    if (!is) return rows;
    std::string line;
    if (!std::getline(is, line)) return rows;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != results_header)
        throw Error(ErrorKind::ParseError, "unexpected results header in '" + path + "'");
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8)
            throw Error(ErrorKind::ParseError,
                        path + " line " + std::to_string(lineno) + ": expected 8 fields");
        BenchRow r;
        r.structure = f[0];
        r.n = std::stoull(f[1]);
        r.seed = std::stoull(f[2]);
        r.method = f[3];
        r.precision = parse_result_double(f[4]);
        r.recall = parse_result_double(f[5]);
        r.f1 = parse_result_double(f[6]);
        r.wall_ms = parse_result_double(f[7]);
        r.failed = std::isnan(r.f1);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::tuple<std::string, std::size_t, std::uint64_t, std::string>
row_key(const BenchRow& r) {
    return {r.structure, r.n, r.seed, r.method};
}

} // namespace detail

// Mean and sample standard deviation of the f1 column over the given rows,
// failed rows excluded. A single row has deviation 0 by convention; no valid
// rows at all gives nan/nan.
inline std::pair<double, double> f1_mean_std(const std::vector<BenchRow>& rows) {
    double sum = 0.0;
    std::size_t c = 0;
    for (const BenchRow& r : rows)
        if (!r.failed) {
            sum += r.f1;
            ++c;
        }
    if (c == 0) return {std::nan(""), std::nan("")};
    const double mean = sum / static_cast<double>(c);
    if (c == 1) return {mean, 0.0};
    double ss = 0.0;
    for (const BenchRow& r : rows)
        if (!r.failed) ss += (r.f1 - mean) * (r.f1 - mean);
    return {mean, std::sqrt(ss / static_cast<double>(c - 1))};
}

// Runs one grid cell: draw the panel, run the method, score against truth.
inline BenchRow run_bench_cell(const std::string& kind, std::size_t n, std::uint64_t seed,
                               const std::string& method, const BenchConfig& cfg) {
    BenchRow row;
    row.structure = kind;
    row.n = n;
    row.seed = seed;
    row.method = method;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        SimSpec spec;
        spec.kind = kind;
        spec.n = n;
        spec.seed = seed;
        spec.self_coef = cfg.self_coef;
        spec.cross_coef = cfg.cross_coef;
        spec.noise_sd = cfg.noise_sd;
        spec.burn_in = cfg.burn_in;
        SimResult sim = simulate(spec);

        Graph estimated;
        if (method == "pc_pmime") {
            DiscoveryParams p = cfg.params;
            p.seed = seed;
            estimated = pc_pmime(sim.panel, p).graph;
        } else if (method == "pwgc") {
            estimated = pwgc(sim.panel, cfg.granger);
        } else {
            throw Error(ErrorKind::InvalidSpec, "unknown method '" + method + "'");
        }
        const Score s = f1_score(estimated, sim.truth);
        row.precision = s.precision;
        row.recall = s.recall;
        row.f1 = s.f1;
    } catch (const Error&) {
        row.failed = true;
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0).count();
    return row;
}

// Full sweep: every (structure, n, seed) cell under both methods. Rows land
// in results.csv incrementally as cells finish, so an interrupted sweep can
// be rerun and picks up where it stopped (cells already on disk, including
// recorded failures, are not recomputed). On completion the file is
// rewritten in canonical (structure, n, seed, method) order and the
// aggregate and plot-data files are derived from it.
inline std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
    namespace fs = std::filesystem;
    cfg.params.validate();
    cfg.granger.validate();
    if (cfg.out_dir.empty())
        throw Error(ErrorKind::InvalidSpec, "bench needs an output directory");
    fs::create_directories(cfg.out_dir);
    const std::string results_path = cfg.out_dir + "/results.csv";

    static const std::vector<std::string> methods{"pc_pmime", "pwgc"};

    // canonical cell order
    std::vector<BenchRow> cells;
    for (const std::string& kind : cfg.grid.kinds)
        for (std::size_t n : cfg.grid.ns)
            for (std::uint64_t seed : cfg.grid.seeds)
                for (const std::string& method : methods) {
                    BenchRow r;
                    r.structure = kind;
                    r.n = n;
                    r.seed = seed;
                    r.method = method;
                    cells.push_back(std::move(r));
                }
    std::sort(cells.begin(), cells.end(), [](const BenchRow& a, const BenchRow& b) {
        return detail::row_key(a) < detail::row_key(b);
    });
    cells.erase(std::unique(cells.begin(), cells.end(),
                            [](const BenchRow& a, const BenchRow& b) {
                                return detail::row_key(a) == detail::row_key(b);
                            }),
                cells.end());

    std::map<std::tuple<std::string, std::size_t, std::uint64_t, std::string>, BenchRow> done;
    for (BenchRow& r : detail::read_results_csv(results_path)) done[detail::row_key(r)] = r;

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (!done.count(detail::row_key(cells[i]))) todo.push_back(i);

    std::ofstream append;
    if (done.empty() && !todo.empty()) {
        append.open(results_path, std::ios::trunc);
        if (!append) throw Error(ErrorKind::IoError, "cannot write '" + results_path + "'");
        append << detail::results_header << '\n';
        append.flush();
    } else if (!todo.empty()) {
        append.open(results_path, std::ios::app);
        if (!append) throw Error(ErrorKind::IoError, "cannot write '" + results_path + "'");
    }

    std::mutex io_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t at = next.fetch_add(1);
            if (at >= todo.size()) return;
            const BenchRow& cell = cells[todo[at]];
            BenchRow row = run_bench_cell(cell.structure, cell.n, cell.seed, cell.method, cfg);
            std::lock_guard<std::mutex> lock(io_mutex);
            detail::write_row(append, row);
            append.flush();
            if (cfg.on_row) cfg.on_row(row);
            done[detail::row_key(row)] = std::move(row);
        }
    };

    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1 || todo.size() < 2) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (append.is_open()) append.close();

    // canonical rewrite plus derived files
    std::vector<BenchRow> rows;
    for (const BenchRow& cell : cells) rows.push_back(done.at(detail::row_key(cell)));

    std::ofstream res(results_path, std::ios::trunc);
    if (!res) throw Error(ErrorKind::IoError, "cannot write '" + results_path + "'");
    res << detail::results_header << '\n';
    for (const BenchRow& r : rows) detail::write_row(res, r);
    res.close();

    std::ofstream agg(cfg.out_dir + "/aggregates.csv", std::ios::trunc);
    if (!agg) throw Error(ErrorKind::IoError, "cannot write aggregates.csv");
    agg << "structure,n,method,mean_f1,std_f1\n";
    for (const std::string& kind : cfg.grid.kinds)
        for (std::size_t n : cfg.grid.ns)
            for (const std::string& method : methods) {
                std::vector<BenchRow> group;
                for (const BenchRow& r : rows)
                    if (r.structure == kind && r.n == n && r.method == method)
                        group.push_back(r);
                if (group.empty()) continue;
                const auto [mean, sd] = f1_mean_std(group);
                agg << kind << ',' << n << ',' << method << ','
                    << detail::format_double(mean) << ',' << detail::format_double(sd) << '\n';
            }
    agg.close();

    for (const std::string& kind : cfg.grid.kinds)
        for (const std::string& method : methods) {
            std::ofstream plot(cfg.out_dir + "/plot_" + kind + "_" + method + ".csv",
                               std::ios::trunc);
            if (!plot) throw Error(ErrorKind::IoError, "cannot write plot data");
            plot << "n,mean_f1,std_f1\n";
            std::vector<std::size_t> ns = cfg.grid.ns;
            std::sort(ns.begin(), ns.end());
            ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
            for (std::size_t n : ns) {
                std::vector<BenchRow> group;
                for (const BenchRow& r : rows)
                    if (r.structure == kind && r.n == n && r.method == method)
                        group.push_back(r);
                if (group.empty()) continue;
                const auto [mean, sd] = f1_mean_std(group);
                plot << n << ',' << detail::format_double(mean) << ','
                     << detail::format_double(sd) << '\n';
            }
        }

    return rows;
}

} // namespace tempoca
