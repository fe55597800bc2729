// Command-line front end: simulate benchmark panels, run the two discovery
// methods, score graphs, and drive full benchmark sweeps, all reproducible
// through run manifests.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tempoca/tempoca.hpp"

namespace fs = std::filesystem;
using namespace tempoca;

namespace {

int log_level() {
    const char* env = std::getenv("TEMPOCA_LOG");
    if (!env) return 0;
    const std::string v(env);
    if (v == "2" || v == "debug") return 2;
    if (v == "1" || v == "info") return 1;
    return 0;
}

void log_info(const std::string& msg) {
    static const int level = log_level();
    if (level >= 1) std::cerr << "[tempoca] " << msg << '\n';
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s, const std::string& flag) {
    std::vector<std::size_t> out;
    for (const std::string& item : split_list(s)) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoull(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidSpec, flag + ": '" + item + "' is not a whole number");
        }
    }
    if (out.empty()) throw Error(ErrorKind::InvalidSpec, flag + " needs at least one value");
    return out;
}

std::string sim_base_name(const SimSpec& s) {
    return s.kind + "_n" + std::to_string(s.n) + "_s" + std::to_string(s.seed);
}

void run_simulate(const Manifest& m) {
    const SimResult sim = simulate(m.sim);
    fs::create_directories(m.out_dir);
    const std::string base = m.out_dir + "/" + sim_base_name(m.sim);
    sim.panel.save_csv(base + ".csv");
    save_graph_json(sim.truth, base + ".truth.json");
    save_manifest(m, base + ".manifest.json");
    log_info("simulated " + m.sim.kind + " n=" + std::to_string(m.sim.n));
    std::cout << "wrote " << base << ".csv (" << sim.panel.n_rows() << " rows, "
              << sim.panel.n_cols() << " series) and ground truth\n";
}

void run_discover(const Manifest& m) {
    const Panel panel = Panel::load_csv(m.in_path);
    const PcResult res = pc_pmime(panel, m.params);
    fs::create_directories(m.out_dir);
    save_graph_json(res.graph, m.out_dir + "/graph.json");
    save_graph_dot(res.graph, m.out_dir + "/graph.dot");
    std::ofstream audit(m.out_dir + "/audit.csv");
    if (!audit) throw Error(ErrorKind::IoError, "cannot write audit.csv");
    write_audit_csv(res.audit, res.graph.names(), audit);
    save_manifest(m, m.out_dir + "/discover.manifest.json");
    std::cout << "discovered " << res.graph.n_edges() << " edges over "
              << res.graph.n_nodes() << " series -> " << m.out_dir << "/graph.json\n";
}

void run_pwgc(const Manifest& m) {
    const Panel panel = Panel::load_csv(m.in_path);
    const Graph graph = pwgc(panel, m.granger);
    fs::create_directories(m.out_dir);
    save_graph_json(graph, m.out_dir + "/graph.json");
    save_graph_dot(graph, m.out_dir + "/graph.dot");
    save_manifest(m, m.out_dir + "/pwgc.manifest.json");
    std::cout << "pairwise test kept " << graph.n_edges() << " edges over "
              << graph.n_nodes() << " series -> " << m.out_dir << "/graph.json\n";
}

void run_evaluate(const Manifest& m) {
    const Graph est = load_graph_json(m.in_path);
    const Graph truth = load_graph_json(m.truth_path);
    const Score s = f1_score(est, truth, m.adjacency_only);
    nlohmann::json j{{"tp", s.tp},           {"fp", s.fp},         {"fn", s.fn},
                     {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
    std::cout << j.dump() << '\n';
    if (!m.out_dir.empty()) {
        fs::create_directories(m.out_dir);
        std::ofstream os(m.out_dir + "/score.json");
        if (!os) throw Error(ErrorKind::IoError, "cannot write score.json");
        os << j.dump(2) << '\n';
        save_manifest(m, m.out_dir + "/evaluate.manifest.json");
    }
}

void run_bench(const Manifest& m) {
    BenchConfig cfg = bench_config_from_manifest(m);
    cfg.on_row = [](const BenchRow& r) {
        log_info("cell " + r.structure + " n=" + std::to_string(r.n) + " seed=" +
                 std::to_string(r.seed) + " " + r.method +
                 (r.failed ? " failed" : " f1=" + detail::format_double(r.f1)));
    };
    fs::create_directories(m.out_dir);
    save_manifest(m, m.out_dir + "/bench.manifest.json");
    const std::vector<BenchRow> rows = run_bench(cfg);
    std::cout << "bench wrote " << rows.size() << " rows -> " << m.out_dir
              << "/results.csv\n";
}

void execute(const Manifest& m) {
    if (m.command == "simulate") run_simulate(m);
    else if (m.command == "discover") run_discover(m);
    else if (m.command == "pwgc") run_pwgc(m);
    else if (m.command == "evaluate") run_evaluate(m);
    else if (m.command == "bench") run_bench(m);
    else throw Error(ErrorKind::InvalidSpec, "unknown command '" + m.command + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lagged causal discovery from multivariate time series"};
    app.require_subcommand(0, 1);

    std::string from_manifest;
    std::string out_override;
    app.add_option("--from-manifest", from_manifest,
                   "replay a recorded run from its manifest file");
    app.add_option("--out", out_override, "output directory override for --from-manifest");

    Manifest m;
    m.command = "";

    auto* sim = app.add_subcommand("simulate", "draw a benchmark panel with ground truth");
    sim->add_option("--kind", m.sim.kind, "structure name")->required();
    sim->add_option("--n", m.sim.n, "series length")->required();
    sim->add_option("--seed", m.sim.seed, "generator seed");
    std::string sim_out = ".";
    sim->add_option("--out", sim_out, "output directory");

    auto* dis = app.add_subcommand("discover", "run the information-theoretic graph search");
    std::string dis_in, dis_out = ".";
    dis->add_option("--in", dis_in, "panel CSV")->required();
    dis->add_option("--out", dis_out, "output directory");
    dis->add_option("--tau-max", m.params.tau_max, "maximum lag");
    dis->add_option("--k-fraction", m.params.k_fraction, "neighbor fraction of n");
    dis->add_option("--A", m.params.A, "embedding stopping threshold");
    dis->add_option("--threshold", m.params.indep_threshold, "independence cutoff on r");
    dis->add_option("--seed", m.params.seed, "tie-breaking jitter seed");

    auto* pw = app.add_subcommand("pwgc", "run the pairwise linear baseline");
    std::string pw_in, pw_out = ".";
    pw->add_option("--in", pw_in, "panel CSV")->required();
    pw->add_option("--out", pw_out, "output directory");
    pw->add_option("--tau-max", m.granger.tau_max, "maximum lag");
    pw->add_option("--alpha", m.granger.alpha, "F-test significance level");

    auto* ev = app.add_subcommand("evaluate", "score an estimated graph against ground truth");
    std::string ev_in, ev_truth, ev_out;
    ev->add_option("--in", ev_in, "estimated graph JSON")->required();
    ev->add_option("--truth", ev_truth, "ground-truth graph JSON")->required();
    ev->add_flag("--adjacency-only", m.adjacency_only, "ignore edge marks when matching");
    ev->add_option("--out", ev_out, "also write score.json here");

    auto* be = app.add_subcommand("bench", "full sweep: simulate, discover, score");
    std::string be_kinds = "fork,v_structure,mediator,diamond,seven_two_hidden";
    std::string be_ns, be_seeds, be_out;
    be->add_option("--kind", be_kinds, "comma list of structures");
    be->add_option("--n", be_ns, "comma list of series lengths")->required();
    be->add_option("--seed", be_seeds, "comma list of seeds")->required();
    be->add_option("--out", be_out, "output directory")->required();
    be->add_option("--tau-max", m.params.tau_max, "maximum lag (both methods)");
    be->add_option("--k-fraction", m.params.k_fraction, "neighbor fraction of n");
    be->add_option("--A", m.params.A, "embedding stopping threshold");
    be->add_option("--threshold", m.params.indep_threshold, "independence cutoff on r");
    be->add_option("--alpha", m.granger.alpha, "baseline F-test level");
    be->add_option("--jobs", m.jobs, "parallel grid cells");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!from_manifest.empty()) {
            if (app.get_subcommands().size() > 0)
                throw Error(ErrorKind::InvalidSpec,
                            "--from-manifest replaces the subcommand; give one or the other");
            m = load_manifest(from_manifest);
            if (!out_override.empty()) m.out_dir = out_override;
            execute(m);
            return 0;
        }

        if (sim->parsed()) {
            m.command = "simulate";
            m.out_dir = sim_out;
        } else if (dis->parsed()) {
            m.command = "discover";
            m.in_path = dis_in;
            m.out_dir = dis_out;
        } else if (pw->parsed()) {
            m.command = "pwgc";
            m.in_path = pw_in;
            m.out_dir = pw_out;
        } else if (ev->parsed()) {
            m.command = "evaluate";
            m.in_path = ev_in;
            m.truth_path = ev_truth;
            m.out_dir = ev_out;
        } else if (be->parsed()) {
            m.command = "bench";
            m.grid.kinds = split_list(be_kinds);
            m.grid.ns = parse_size_list(be_ns, "--n");
            for (std::size_t s : parse_size_list(be_seeds, "--seed"))
                m.grid.seeds.push_back(s);
            m.out_dir = be_out;
            m.granger.tau_max = m.params.tau_max; // one lag bound drives both methods
        } else {
            std::cerr << app.help();
            return 1;
        }
        execute(m);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
