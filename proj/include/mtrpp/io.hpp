#ifndef MTRPP_IO_HPP
#define MTRPP_IO_HPP

#include <fstream>
#include <string>

#include <json.hpp>

#include "mtrpp/memetic.hpp"

namespace mtrpp {

using Json = nlohmann::ordered_json;

inline double round_ms(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

/// Deterministic part of a run report: a pure function of
/// (instance, config, seed) for any run that converges within its budget.
inline Json result_json(const RunReport& r) {
    Json j;
    j["instance"] = r.instance;
    j["n"] = r.n;
    j["servers"] = r.servers;
    j["seed"] = r.seed;
    j["mode"] = r.mode;
    j["eval"] = r.eval;
    j["limi"] = r.limi;
    j["st"] = r.st;
    j["nump"] = r.nump;
    j["q"] = r.q;
    j["t_max"] = r.t_max;
    j["best_surrogate"] = r.best_surrogate;
    j["best_true"] = r.best_true;
    j["negative_revenue"] = r.negative_revenue;
    j["routes"] = r.routes;
    j["unvisited"] = r.unvisited;
    return j;
}

inline Json runtime_json(const RunReport& r) {
    Json j;
    j["time_to_best_s"] = round_ms(r.time_to_best_s);
    j["wall_s"] = round_ms(r.wall_s);
    j["generations"] = r.generations;
    j["visited_neighbors"] = r.visited_neighbors;
    j["crossovers"] = r.crossovers;
    j["perturbations"] = r.perturbations;
    return j;
}

inline Json report_json(const RunReport& r) {
    Json j;
    j["result"] = result_json(r);
    j["runtime"] = runtime_json(r);
    return j;
}

/// Solution file: routes plus both objective values and run provenance.
struct SolutionFile {
    std::string instance_name;
    double objective_true = 0;
    double objective_surrogate = 0;
    std::vector<std::vector<int>> routes;
    std::vector<int> unvisited;
    std::uint64_t seed = 0;
    std::string mode;
};

inline Json solution_json(const SolutionFile& s) {
    Json j;
    j["instance_name"] = s.instance_name;
    j["objective_true"] = s.objective_true;
    j["objective_surrogate"] = s.objective_surrogate;
    j["routes"] = s.routes;
    j["unvisited"] = s.unvisited;
    j["seed"] = s.seed;
    j["mode"] = s.mode;
    return j;
}

inline SolutionFile make_solution_file(const Solution& sol, const Instance& inst,
                                       std::uint64_t seed, const std::string& mode) {
    SolutionFile s;
    s.instance_name = inst.name;
    s.objective_true = objective_true(sol, inst);
    s.objective_surrogate = objective_surrogate(sol, inst);
    s.routes = sol.routes;
    s.unvisited = sol.unvisited;
    s.seed = seed;
    s.mode = mode;
    return s;
}

inline void write_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

inline Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return Json::parse(in);
}

inline SolutionFile load_solution(const std::string& path) {
    const Json j = read_json(path);
    SolutionFile s;
    s.instance_name = j.at("instance_name").get<std::string>();
    s.objective_true = j.at("objective_true").get<double>();
    s.objective_surrogate = j.at("objective_surrogate").get<double>();
    s.routes = j.at("routes").get<std::vector<std::vector<int>>>();
    s.unvisited = j.at("unvisited").get<std::vector<int>>();
    s.seed = j.value("seed", std::uint64_t{0});
    s.mode = j.value("mode", std::string{});
    return s;
}

/// Materializes the routes of a solution file against an instance.
inline Solution solution_from_file(const SolutionFile& s, const Instance& inst) {
    Solution sol;
    sol.routes = s.routes;
    sol.unvisited = s.unvisited;
    rebuild_prefixes(sol, inst);
    return sol;
}

}  // namespace mtrpp

#endif
