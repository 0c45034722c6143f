#ifndef MTRPP_ORACLE_HPP
#define MTRPP_ORACLE_HPP

#include <cstdint>
#include <limits>

#include "mtrpp/moves.hpp"

namespace mtrpp {

struct SizeGuardError : std::runtime_error {
    explicit SizeGuardError(const std::string& what_) : std::runtime_error(what_) {}
};

struct OracleResult {
    double optimum = 0;
    Solution witness;
    std::uint64_t enumerated = 0;  // candidate orderings and partition combinations examined
};

namespace detail {

struct SingleRouteBest {
    double value = 0;                 // best clipped revenue over all orderings
    std::vector<int> order;           // an ordering achieving it
};

// Depth-first enumeration of every ordering of every customer subset for one
// route. Each DFS node extends a path by one customer and scores the full
// prefix, so best-per-subset falls out of a single traversal.
inline void route_orders_dfs(const Instance& inst, const std::vector<int>& ids,
                             std::uint32_t used, int last, double length, double revenue,
                             std::vector<int>& path, std::vector<SingleRouteBest>& best,
                             std::uint64_t& enumerated) {
    for (size_t t = 0; t < ids.size(); ++t) {
        if (used & (1u << t)) continue;
        const int v = ids[t];
        const double len2 = length + inst.dist(last, v);
        const double rev_v = inst.profit(v) - len2;
        const double rev2 = revenue + (rev_v > 0 ? rev_v : 0.0);
        const std::uint32_t used2 = used | (1u << t);
        path.push_back(v);
        ++enumerated;
        if (rev2 > best[used2].value) {
            best[used2].value = rev2;
            best[used2].order = path;
        }
        route_orders_dfs(inst, ids, used2, v, len2, rev2, path, best, enumerated);
        path.pop_back();
    }
}

}  // namespace detail

/// Exhaustive solver for tiny instances (n <= 10): every customer subset,
/// every split into at most K routes (identical routes deduplicated), every
/// ordering inside a route. Maximizes the clipped objective.
inline OracleResult exact_solve(const Instance& inst) {
    if (inst.n > 10)
        throw SizeGuardError("exact_solve: n = " + std::to_string(inst.n) +
                             " exceeds the guard (n <= 10)");
    const int n = inst.n;
    const std::uint32_t full = (1u << n) - 1;
    std::vector<int> ids(n);
    for (int v = 1; v <= n; ++v) ids[v - 1] = v;

    OracleResult res;
    std::vector<detail::SingleRouteBest> single(full + 1);
    {
        std::vector<int> path;
        detail::route_orders_dfs(inst, ids, 0, 0, 0.0, 0.0, path, single, res.enumerated);
    }

    const int K = std::min(inst.servers, n);  // extra routes beyond n stay empty
    // best[mask] = best objective visiting exactly `mask` with <= k routes
    std::vector<double> best(full + 1), prev(full + 1);
    std::vector<std::uint32_t> choice(static_cast<size_t>(K) * (full + 1), 0);
    for (std::uint32_t m = 0; m <= full; ++m) best[m] = single[m].value;
    for (std::uint32_t m = 0; m <= full; ++m) choice[m] = m;  // k=1: the whole mask is one route
    for (int k = 2; k <= K; ++k) {
        prev.swap(best);
        for (std::uint32_t m = 0; m <= full; ++m) {
            double b = prev[m];  // last route empty
            std::uint32_t pick = 0;
            for (std::uint32_t s = m; s != 0; s = (s - 1) & m) {
                ++res.enumerated;
                const double cand = prev[m ^ s] + single[s].value;
                if (cand > b) {
                    b = cand;
                    pick = s;
                }
            }
            best[m] = b;
            choice[static_cast<size_t>(k - 1) * (full + 1) + m] = pick;
        }
    }

    std::uint32_t arg = 0;
    for (std::uint32_t m = 0; m <= full; ++m)
        if (best[m] > best[arg]) arg = m;
    res.optimum = best[arg];

    res.witness.routes.assign(inst.servers, {});
    std::uint32_t m = arg;
    for (int k = K; k >= 1; --k) {
        const std::uint32_t s = choice[static_cast<size_t>(k - 1) * (full + 1) + m];
        res.witness.routes[k - 1] = single[s].order;
        m ^= s;
    }
    rebuild_unvisited(res.witness, inst);
    rebuild_prefixes(res.witness, inst);
    return res;
}

struct GainCheck {
    double fast = 0;
    double naive = 0;
    double discrepancy = 0;
};

/// Compares the O(1) evaluator of one move against clone-apply-recompute.
inline GainCheck check_gain(const Solution& sol, const Instance& inst, const Move& mv) {
    GainCheck c;
    Move probe = mv;
    c.fast = evaluate_gain(sol, inst, probe);
    c.naive = naive_gain(sol, inst, mv);
    c.discrepancy = std::abs(c.fast - c.naive);
    return c;
}

}  // namespace mtrpp

#endif
