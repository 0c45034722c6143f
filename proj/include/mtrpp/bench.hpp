#ifndef MTRPP_BENCH_HPP
#define MTRPP_BENCH_HPP

#include <atomic>
#include <cstdlib>
#include <thread>

#include "mtrpp/io.hpp"

namespace mtrpp {

struct BenchEntry {
    std::string instance;
    int runs = 1;
    double t_max = 0;  // <= 0: instance default (2n)
    std::uint64_t seed = 1;
    std::optional<double> best_known;
    std::optional<double> ub;
    std::string mode = "ehsa";
    std::string eval = "fast";
};

struct BenchManifest {
    std::string output;  // CSV path
    std::vector<BenchEntry> entries;
};

inline BenchManifest load_manifest(const std::string& path) {
    const Json j = read_json(path);
    BenchManifest m;
    m.output = j.value("output", std::string{});
    const Json defaults = j.value("defaults", Json::object());
    for (const auto& e : j.at("entries")) {
        BenchEntry be;
        be.instance = e.at("instance").get<std::string>();
        be.runs = e.value("runs", defaults.value("runs", 1));
        be.t_max = e.value("t_max", defaults.value("t_max", 0.0));
        be.seed = e.value("seed", defaults.value("seed", std::uint64_t{1}));
        be.mode = e.value("mode", defaults.value("mode", std::string{"ehsa"}));
        be.eval = e.value("eval", defaults.value("eval", std::string{"fast"}));
        if (e.contains("best_known")) be.best_known = e.at("best_known").get<double>();
        if (e.contains("ub")) be.ub = e.at("ub").get<double>();
        m.entries.push_back(std::move(be));
    }
    return m;
}

struct BenchRow {
    std::string instance;
    int n = 0, k = 0, runs = 0;
    double best = 0;        // max over runs, clipped objective
    double average = 0;     // mean over runs of the per-run best
    double tavg_s = 0;      // mean time-to-best
    double visited_avg = 0;
    std::optional<double> ub, best_known, delta;
    std::string klass;  // Win | Match | Fail when best_known is present
    std::string error;  // non-empty when the entry failed
    std::vector<RunReport> reports;
};

inline int env_threads() {
    const char* s = std::getenv("MTRPP_THREADS");
    if (!s) return 0;
    return std::max(0, std::atoi(s));
}

/// Runs every (entry, run) task, optionally on a small thread pool
/// (threads <= 1 means the caller's thread). Reports land in fixed slots, so
/// output does not depend on scheduling. Entry failures are recorded per row
/// and do not stop the suite.
inline std::vector<BenchRow> run_bench(const BenchManifest& manifest, int threads,
                                       const std::function<void(const std::string&)>& log =
                                           nullptr) {
    const int ne = static_cast<int>(manifest.entries.size());
    std::vector<BenchRow> rows(ne);
    std::vector<std::optional<Instance>> instances(ne);

    for (int e = 0; e < ne; ++e) {
        const BenchEntry& be = manifest.entries[e];
        BenchRow& row = rows[e];
        row.instance = be.instance;
        row.runs = be.runs;
        try {
            instances[e] = load_instance(be.instance);
            row.n = instances[e]->n;
            row.k = instances[e]->servers;
            row.reports.resize(be.runs);
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
    }

    struct Task {
        int entry, run;
    };
    std::vector<Task> tasks;
    for (int e = 0; e < ne; ++e) {
        if (!rows[e].error.empty()) continue;
        for (int r = 0; r < manifest.entries[e].runs; ++r) tasks.push_back({e, r});
    }

    auto run_task = [&](const Task& t) {
        const BenchEntry& be = manifest.entries[t.entry];
        SolverConfig cfg;
        cfg.seed = derive_seed(be.seed, t.run);
        cfg.t_max = be.t_max;
        cfg.mode = parse_mode(be.mode);
        cfg.eval = parse_eval_mode(be.eval);
        rows[t.entry].reports[t.run] = ehsa_solve(*instances[t.entry], cfg);
        if (log)
            log(be.instance + " run " + std::to_string(t.run) + "/" + std::to_string(be.runs));
    };

    if (threads <= 1) {
        for (const Task& t : tasks) run_task(t);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        const int nw = std::min<int>(threads, static_cast<int>(tasks.size()));
        pool.reserve(nw);
        for (int w = 0; w < nw; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const size_t idx = next.fetch_add(1);
                    if (idx >= tasks.size()) return;
                    run_task(tasks[idx]);
                }
            });
        for (auto& th : pool) th.join();
    }

    for (int e = 0; e < ne; ++e) {
        BenchRow& row = rows[e];
        if (!row.error.empty() || row.reports.empty()) continue;
        double best = row.reports[0].best_true;
        double sum = 0, tsum = 0, vsum = 0;
        for (const RunReport& r : row.reports) {
            best = std::max(best, r.best_true);
            sum += r.best_true;
            tsum += r.time_to_best_s;
            vsum += static_cast<double>(r.visited_neighbors);
        }
        row.best = best;
        row.average = sum / row.reports.size();
        row.tavg_s = tsum / row.reports.size();
        row.visited_avg = vsum / row.reports.size();
        row.ub = manifest.entries[e].ub ? manifest.entries[e].ub : instances[e]->ub;
        row.best_known = manifest.entries[e].best_known;
        if (row.best_known) {
            const double bk = *row.best_known;
            row.delta = (row.best - bk) / bk;
            const double tol = 1e-6 + 1e-9 * std::abs(bk);
            row.klass = row.best > bk + tol ? "Win" : (row.best >= bk - tol ? "Match" : "Fail");
        }
    }
    return rows;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

/// RFC 4180 rows (CRLF line ends). The timing columns are measurements; all
/// other columns are deterministic given the manifest seeds.
inline std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out =
        "instance,n,k,runs,best,average,tavg_s,visited_avg,ub,best_known,delta,result,error\r\n";
    auto num = [](double x) { return mtrpp::detail::format_double(x); };
    for (const BenchRow& r : rows) {
        out += detail::csv_field(r.instance);
        out += ',' + std::to_string(r.n) + ',' + std::to_string(r.k) + ',' +
               std::to_string(r.runs);
        if (r.error.empty()) {
            out += ',' + num(r.best) + ',' + num(r.average) + ',' + num(round_ms(r.tavg_s)) +
                   ',' + num(r.visited_avg);
        } else {
            out += ",,,,";
        }
        out += ',';
        if (r.ub) out += num(*r.ub);
        out += ',';
        if (r.best_known) out += num(*r.best_known);
        out += ',';
        if (r.delta) out += num(*r.delta);
        out += ',' + r.klass;
        out += ',' + detail::csv_field(r.error);
        out += "\r\n";
    }
    return out;
}

struct SimilarityReport {
    std::string instance;
    int solutions = 0;
    int pairs = 0;
    double sim_max = 0, sim_min = 0, sim_avg = 0;
};

inline std::vector<Arc> arcs_of_routes(const std::vector<std::vector<int>>& routes) {
    std::vector<Arc> arcs;
    for (const auto& route : routes) {
        int prev = 0;
        for (int v : route) {
            arcs.emplace_back(prev, v);
            prev = v;
        }
    }
    std::sort(arcs.begin(), arcs.end());
    return arcs;
}

/// Pairwise arc similarity over >= 2 solutions of one instance.
inline SimilarityReport similarity_report(const std::vector<SolutionFile>& files) {
    if (files.size() < 2)
        throw ValidationError("similarity needs at least two solutions");
    for (const SolutionFile& f : files)
        if (f.instance_name != files[0].instance_name)
            throw ValidationError("mismatched instances: '" + f.instance_name + "' vs '" +
                                  files[0].instance_name + "'");
    std::vector<std::vector<Arc>> arcs;
    arcs.reserve(files.size());
    for (const SolutionFile& f : files) arcs.push_back(arcs_of_routes(f.routes));

    SimilarityReport rep;
    rep.instance = files[0].instance_name;
    rep.solutions = static_cast<int>(files.size());
    rep.sim_min = 1.0;
    double sum = 0;
    for (size_t i = 0; i < arcs.size(); ++i) {
        for (size_t j = i + 1; j < arcs.size(); ++j) {
            const double s = similarity(arcs[i], arcs[j]);
            rep.sim_max = std::max(rep.sim_max, s);
            rep.sim_min = std::min(rep.sim_min, s);
            sum += s;
            ++rep.pairs;
        }
    }
    rep.sim_avg = sum / rep.pairs;
    return rep;
}

inline Json similarity_json(const SimilarityReport& r) {
    Json j;
    j["instance"] = r.instance;
    j["solutions"] = r.solutions;
    j["pairs"] = r.pairs;
    j["sim_max"] = r.sim_max;
    j["sim_min"] = r.sim_min;
    j["sim_avg"] = r.sim_avg;
    return j;
}

}  // namespace mtrpp

#endif
