#ifndef MTRPP_SOLUTION_HPP
#define MTRPP_SOLUTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mtrpp/instance.hpp"

namespace mtrpp {

/// Tolerance used for every cache-vs-recompute comparison.
inline double cache_tol(double f) { return 1e-9 * (1.0 + std::abs(f)); }

/// Per-route cumulative arrays, indexed by position 0..m (position 0 = depot):
///   vsd[i] = sum of the first i edge lengths  (the waiting time of x_i)
///   wsd[i] = sum of t * edge_t over the first i edges
/// vsd gives O(1) gains for relocation-style moves, wsd for in-route reversal.
struct PrefixArrays {
    std::vector<double> vsd;
    std::vector<double> wsd;
};

/// K depot-rooted open routes over a subset of customers. Routes store
/// customer ids only; the depot is implicit at position 0. A Solution is
/// owned by a single search thread; snapshots of it are freely shareable.
struct Solution {
    std::vector<std::vector<int>> routes;
    std::vector<int> unvisited;  // ascending
    std::vector<PrefixArrays> prefixes;
    double surrogate = 0.0;  // cached unclipped objective

    int route_len(int k) const { return static_cast<int>(routes[k].size()); }
    int num_routes() const { return static_cast<int>(routes.size()); }
    int visited_count() const {
        int m = 0;
        for (const auto& r : routes) m += static_cast<int>(r.size());
        return m;
    }
};

inline void rebuild_route_prefixes(Solution& sol, const Instance& inst, int k) {
    const auto& route = sol.routes[k];
    auto& pa = sol.prefixes[k];
    const int m = static_cast<int>(route.size());
    pa.vsd.assign(m + 1, 0.0);
    pa.wsd.assign(m + 1, 0.0);
    int prev = 0;
    for (int i = 1; i <= m; ++i) {
        const double e = inst.dist(prev, route[i - 1]);
        pa.vsd[i] = pa.vsd[i - 1] + e;
        pa.wsd[i] = pa.wsd[i - 1] + static_cast<double>(i) * e;
        prev = route[i - 1];
    }
}

/// Unclipped objective recomputed from scratch: sum over visited customers of
/// (profit - waiting time). Summed per position so that it shares its terms
/// with objective_true when no revenue is negative.
inline double objective_surrogate(const Solution& sol, const Instance& inst) {
    double f = 0.0;
    for (const auto& route : sol.routes) {
        double l = 0.0;
        int prev = 0;
        for (int v : route) {
            l += inst.dist(prev, v);
            f += inst.profit(v) - l;
            prev = v;
        }
    }
    return f;
}

/// True objective: sum of clipped revenues max(profit - waiting time, 0).
inline double objective_true(const Solution& sol, const Instance& inst) {
    double f = 0.0;
    for (const auto& route : sol.routes) {
        double l = 0.0;
        int prev = 0;
        for (int v : route) {
            l += inst.dist(prev, v);
            const double rev = inst.profit(v) - l;
            if (rev > 0.0) f += rev;
            prev = v;
        }
    }
    return f;
}

/// Recomputes every prefix array and the cached surrogate. Idempotent.
inline void rebuild_prefixes(Solution& sol, const Instance& inst) {
    sol.prefixes.resize(sol.routes.size());
    for (int k = 0; k < sol.num_routes(); ++k) rebuild_route_prefixes(sol, inst, k);
    sol.surrogate = objective_surrogate(sol, inst);
}

/// All customers unvisited, K empty routes.
inline Solution make_empty_solution(const Instance& inst) {
    Solution sol;
    sol.routes.assign(inst.servers, {});
    sol.unvisited.resize(inst.n);
    for (int v = 1; v <= inst.n; ++v) sol.unvisited[v - 1] = v;
    rebuild_prefixes(sol, inst);
    return sol;
}

/// Rebuilds the unvisited set from the routes (ascending order).
inline void rebuild_unvisited(Solution& sol, const Instance& inst) {
    std::vector<char> seen(static_cast<size_t>(inst.n) + 1, 0);
    for (const auto& route : sol.routes)
        for (int v : route) seen[v] = 1;
    sol.unvisited.clear();
    for (int v = 1; v <= inst.n; ++v)
        if (!seen[v]) sol.unvisited.push_back(v);
}

using Arc = std::pair<int, int>;

/// Directed arc set: every (x_i, x_{i+1}) plus the depot-out arc (0, x_1) of
/// each non-empty route. Returned sorted for set arithmetic.
inline std::vector<Arc> arc_set(const Solution& sol) {
    std::vector<Arc> arcs;
    arcs.reserve(static_cast<size_t>(sol.visited_count()));
    for (const auto& route : sol.routes) {
        int prev = 0;
        for (int v : route) {
            arcs.emplace_back(prev, v);
            prev = v;
        }
    }
    std::sort(arcs.begin(), arcs.end());
    return arcs;
}

inline double similarity(const std::vector<Arc>& a, const std::vector<Arc>& b) {
    if (a.empty() && b.empty()) return 1.0;
    size_t inter = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++inter;
            ++i;
            ++j;
        }
    }
    const size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Jaccard index of the two directed arc sets; 1 when both are empty.
inline double similarity(const Solution& a, const Solution& b) {
    return similarity(arc_set(a), arc_set(b));
}

struct Verdict {
    bool ok = true;
    std::string message;  // first violation found
};

/// Checks the customer partition, route count, and cache consistency.
inline Verdict validate_solution(const Solution& sol, const Instance& inst) {
    if (sol.num_routes() != inst.servers)
        return {false, "wrong route count: " + std::to_string(sol.num_routes()) +
                           " != K=" + std::to_string(inst.servers)};
    std::vector<char> seen(static_cast<size_t>(inst.n) + 1, 0);
    for (const auto& route : sol.routes) {
        for (int v : route) {
            if (v < 1 || v > inst.n) return {false, "unknown customer id " + std::to_string(v)};
            if (seen[v]) return {false, "duplicate customer " + std::to_string(v)};
            seen[v] = 1;
        }
    }
    for (int v : sol.unvisited) {
        if (v < 1 || v > inst.n)
            return {false, "unknown customer id " + std::to_string(v) + " in unvisited set"};
        if (seen[v])
            return {false, "customer " + std::to_string(v) + " both visited and unvisited"};
        seen[v] = 1;
    }
    for (int v = 1; v <= inst.n; ++v)
        if (!seen[v])
            return {false, "customer " + std::to_string(v) + " missing from routes and unvisited"};
    if (sol.prefixes.size() != sol.routes.size()) return {false, "prefix arrays missing"};
    for (int k = 0; k < sol.num_routes(); ++k) {
        Solution probe;  // recompute one route's prefixes without copying the rest
        probe.routes = {sol.routes[k]};
        probe.prefixes.resize(1);
        rebuild_route_prefixes(probe, inst, 0);
        const auto& have = sol.prefixes[k];
        const auto& want = probe.prefixes[0];
        if (have.vsd.size() != want.vsd.size() || have.wsd.size() != want.wsd.size())
            return {false, "stale prefix arrays for route " + std::to_string(k)};
        for (size_t i = 0; i < want.vsd.size(); ++i) {
            if (std::abs(have.vsd[i] - want.vsd[i]) > cache_tol(want.vsd[i]) ||
                std::abs(have.wsd[i] - want.wsd[i]) > cache_tol(want.wsd[i]))
                return {false, "stale prefix arrays for route " + std::to_string(k)};
        }
    }
    const double f = objective_surrogate(sol, inst);
    if (std::abs(f - sol.surrogate) > cache_tol(f))
        return {false, "stale surrogate cache: " + std::to_string(sol.surrogate) +
                           " vs recomputed " + std::to_string(f)};
    return {};
}

}  // namespace mtrpp

#endif
