// Command-line front end: instance generation, solving, solution checking,
// exact oracle runs, benchmark suites, and solution-similarity analysis.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "mtrpp/bench.hpp"
#include "mtrpp/io.hpp"
#include "mtrpp/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSizeGuard = 3;

void emit(const mtrpp::Json& j, const std::string& out) {
    if (out.empty() || out == "-")
        std::cout << j.dump(2) << "\n";
    else
        mtrpp::write_json(j, out);
}

int cmd_gen(int n, int k, double range, std::uint64_t seed, const std::string& name,
            const std::string& out) {
    mtrpp::Instance inst = mtrpp::gen_instance(n, k, range, seed);
    if (!name.empty()) inst.name = name;
    mtrpp::save_instance(inst, out);
    if (inst.clamped_profits)
        std::cerr << "warning: degenerate profit bounds, some profits clamped to the lower "
                     "bound\n";
    std::cerr << "wrote " << out << " (n=" << inst.n << ", K=" << inst.servers << ")\n";
    return kExitOk;
}

int cmd_solve(const std::string& instance_path, mtrpp::SolverConfig cfg, int runs,
              const std::string& out, const std::string& solution_out,
              const std::string& solutions_dir) {
    const mtrpp::Instance inst = mtrpp::load_instance(instance_path);
    const std::uint64_t base_seed = cfg.seed;
    if (!solutions_dir.empty()) std::filesystem::create_directories(solutions_dir);

    std::vector<mtrpp::RunReport> reports;
    reports.reserve(runs);
    for (int r = 0; r < runs; ++r) {
        cfg.seed = mtrpp::derive_seed(base_seed, r);
        reports.push_back(mtrpp::ehsa_solve(inst, cfg));
        const mtrpp::RunReport& rep = reports.back();
        std::cerr << "run " << r << " seed " << rep.seed << ": best " << rep.best_true
                  << " (surrogate " << rep.best_surrogate << ") in " << rep.time_to_best_s
                  << "s\n";
        if (!solutions_dir.empty()) {
            mtrpp::Solution sol;
            sol.routes = rep.routes;
            sol.unvisited = rep.unvisited;
            mtrpp::rebuild_prefixes(sol, inst);
            const auto sf = mtrpp::make_solution_file(sol, inst, rep.seed, rep.mode);
            mtrpp::write_json(mtrpp::solution_json(sf),
                              solutions_dir + "/run_" + std::to_string(r) + ".json");
        }
    }

    int best_run = 0;
    double sum = 0, tsum = 0;
    for (int r = 0; r < runs; ++r) {
        if (reports[r].best_surrogate > reports[best_run].best_surrogate) best_run = r;
        sum += reports[r].best_true;
        tsum += reports[r].time_to_best_s;
    }

    mtrpp::Json j;
    j["runs"] = mtrpp::Json::array();
    for (const auto& rep : reports) j["runs"].push_back(mtrpp::report_json(rep));
    j["aggregate"] = {{"runs", runs},
                      {"best", reports[best_run].best_true},
                      {"best_surrogate", reports[best_run].best_surrogate},
                      {"average", sum / runs},
                      {"mean_time_to_best_s", mtrpp::round_ms(tsum / runs)}};
    emit(j, out);

    if (!solution_out.empty()) {
        mtrpp::Solution sol;
        sol.routes = reports[best_run].routes;
        sol.unvisited = reports[best_run].unvisited;
        mtrpp::rebuild_prefixes(sol, inst);
        const auto sf =
            mtrpp::make_solution_file(sol, inst, reports[best_run].seed, reports[best_run].mode);
        mtrpp::write_json(mtrpp::solution_json(sf), solution_out);
    }
    return kExitOk;
}

int cmd_check(const std::string& instance_path, const std::string& solution_path) {
    const mtrpp::Instance inst = mtrpp::load_instance(instance_path);
    const mtrpp::SolutionFile sf = mtrpp::load_solution(solution_path);
    if (sf.instance_name != inst.name) {
        std::cout << "INVALID: solution file is for instance '" << sf.instance_name
                  << "', not '" << inst.name << "'\n";
        return kExitValidation;
    }
    const mtrpp::Solution sol = mtrpp::solution_from_file(sf, inst);
    const mtrpp::Verdict verdict = mtrpp::validate_solution(sol, inst);
    if (!verdict.ok) {
        std::cout << "INVALID: " << verdict.message << "\n";
        return kExitValidation;
    }
    const double t = mtrpp::objective_true(sol, inst);
    const double s = mtrpp::objective_surrogate(sol, inst);
    std::cout << "OK true=" << t << " surrogate=" << s << "\n";
    if (t - s > mtrpp::cache_tol(t))
        std::cout << "warning: negative revenue present, objectives disagree\n";
    if (std::abs(sf.objective_true - t) > mtrpp::cache_tol(t) ||
        std::abs(sf.objective_surrogate - s) > mtrpp::cache_tol(s)) {
        std::cout << "INVALID: stored objectives disagree with recomputation (stored "
                  << sf.objective_true << "/" << sf.objective_surrogate << ")\n";
        return kExitValidation;
    }
    return kExitOk;
}

int cmd_oracle(const std::string& instance_path, const std::string& out) {
    const mtrpp::Instance inst = mtrpp::load_instance(instance_path);
    const mtrpp::OracleResult res = mtrpp::exact_solve(inst);
    mtrpp::Json j;
    j["instance"] = inst.name;
    j["optimum"] = res.optimum;
    j["routes"] = res.witness.routes;
    j["unvisited"] = res.witness.unvisited;
    j["enumerated"] = res.enumerated;
    emit(j, out);
    return kExitOk;
}

int cmd_bench(const std::string& manifest_path, const std::string& out_override, int threads,
              bool quiet) {
    mtrpp::BenchManifest manifest = mtrpp::load_manifest(manifest_path);
    if (!out_override.empty()) manifest.output = out_override;
    const auto log = quiet ? std::function<void(const std::string&)>{}
                           : [](const std::string& s) { std::cerr << s << "\n"; };
    const auto rows = mtrpp::run_bench(manifest, threads, log);
    const std::string csv = mtrpp::bench_csv(rows);
    if (manifest.output.empty() || manifest.output == "-") {
        std::cout << csv;
    } else {
        std::ofstream f(manifest.output, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + manifest.output);
        f << csv;
        std::cerr << "wrote " << manifest.output << "\n";
    }
    bool any_error = false;
    for (const auto& r : rows)
        if (!r.error.empty()) {
            std::cerr << "entry failed: " << r.instance << ": " << r.error << "\n";
            any_error = true;
        }
    return any_error ? kExitValidation : kExitOk;
}

int cmd_similarity(const std::vector<std::string>& files, const std::string& out) {
    std::vector<mtrpp::SolutionFile> sols;
    sols.reserve(files.size());
    for (const auto& f : files) sols.push_back(mtrpp::load_solution(f));
    const auto rep = mtrpp::similarity_report(sols);
    emit(mtrpp::similarity_json(rep), out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MTRPP solver: memetic search with O(1) neighborhood evaluation"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random Euclidean instance");
    int gen_n = 50, gen_k = 2;
    double gen_range = 100.0;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_name;
    gen->add_option("--n", gen_n, "number of customers")->required();
    gen->add_option("--k", gen_k, "number of servers")->required();
    gen->add_option("--range", gen_range, "coordinate range (square side)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--name", gen_name, "instance name override");
    gen->add_option("--out", gen_out, "output instance file")->required();

    // solve
    auto* solve = app.add_subcommand("solve", "run the memetic solver");
    std::string so_instance, so_out = "-", so_solution, so_solutions_dir, so_mode = "ehsa",
                so_eval = "fast";
    mtrpp::SolverConfig so_cfg;
    int so_runs = 1;
    solve->add_option("--instance", so_instance, "instance file")->required();
    solve->add_option("--seed", so_cfg.seed, "base seed (run r uses seed+r)");
    solve->add_option("--runs", so_runs, "independent runs")->check(CLI::PositiveNumber);
    solve->add_option("--time-limit", so_cfg.t_max, "seconds per run (default 2n)");
    solve->add_option("--mode", so_mode, "ehsa|ils|ehsa-rbx");
    solve->add_option("--eval", so_eval, "fast|naive");
    solve->add_option("--limi", so_cfg.limi, "stagnation limit");
    solve->add_option("--st", so_cfg.st, "perturbation strength");
    solve->add_option("--pop", so_cfg.nump, "population size");
    solve->add_option("--q", so_cfg.q, "greedy candidate width");
    solve->add_option("--out", so_out, "report JSON ('-' = stdout)");
    solve->add_option("--solution", so_solution, "write best solution file");
    solve->add_option("--solutions-dir", so_solutions_dir, "write one solution file per run");

    // check
    auto* check = app.add_subcommand("check", "validate a solution file and print objectives");
    std::string ck_instance, ck_solution;
    check->add_option("--instance", ck_instance, "instance file")->required();
    check->add_option("--solution", ck_solution, "solution file")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact solve (n <= 10)");
    std::string or_instance, or_out = "-";
    oracle->add_option("--instance", or_instance, "instance file")->required();
    oracle->add_option("--out", or_out, "result JSON ('-' = stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "run a benchmark manifest, emit CSV");
    std::string be_manifest, be_out;
    int be_threads = mtrpp::env_threads();
    bool be_quiet = false;
    bench->add_option("--manifest", be_manifest, "manifest JSON")->required();
    bench->add_option("--out", be_out, "CSV path override ('-' = stdout)");
    bench->add_option("--threads", be_threads, "parallel runs (default: MTRPP_THREADS)");
    bench->add_flag("--quiet", be_quiet, "suppress progress logging");

    // similarity
    auto* sim = app.add_subcommand("similarity", "pairwise arc similarity of solution files");
    std::vector<std::string> si_files;
    std::string si_out = "-";
    sim->add_option("--solutions", si_files, "two or more solution files")->required();
    sim->add_option("--out", si_out, "report JSON ('-' = stdout)");

    try {
        app.parse(argc, argv);
        if (*gen) return cmd_gen(gen_n, gen_k, gen_range, gen_seed, gen_name, gen_out);
        if (*solve) {
            so_cfg.mode = mtrpp::parse_mode(so_mode);
            so_cfg.eval = mtrpp::parse_eval_mode(so_eval);
            return cmd_solve(so_instance, so_cfg, so_runs, so_out, so_solution,
                             so_solutions_dir);
        }
        if (*check) return cmd_check(ck_instance, ck_solution);
        if (*oracle) return cmd_oracle(or_instance, or_out);
        if (*bench) return cmd_bench(be_manifest, be_out, be_threads, be_quiet);
        if (*sim) return cmd_similarity(si_files, si_out);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    } catch (const mtrpp::SizeGuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSizeGuard;
    } catch (const mtrpp::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const mtrpp::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
