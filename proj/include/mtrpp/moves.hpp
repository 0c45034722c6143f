#ifndef MTRPP_MOVES_HPP
#define MTRPP_MOVES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "mtrpp/solution.hpp"

namespace mtrpp {

enum class MoveKind : std::uint8_t {
    Swap,
    Insert,
    TwoOpt,
    OrOpt,
    InterSwap,
    InterInsert,
    InterTwoOpt,
    Add,
    Drop,
};

inline const char* kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::Swap: return "swap";
        case MoveKind::Insert: return "insert";
        case MoveKind::TwoOpt: return "two_opt";
        case MoveKind::OrOpt: return "or_opt";
        case MoveKind::InterSwap: return "inter_swap";
        case MoveKind::InterInsert: return "inter_insert";
        case MoveKind::InterTwoOpt: return "inter_two_opt";
        case MoveKind::Add: return "add";
        case MoveKind::Drop: return "drop";
    }
    return "?";
}

/// One neighborhood action. Position conventions (all 1-based, depot = 0):
///   Swap        route_a, swap nodes at positions i and j.
///   Insert      route_a, relocate the node at i to just after position j.
///   TwoOpt      route_a, remove the edges ending at positions i and j
///               (j >= i+2) and reverse the segment in between.
///   OrOpt       route_a, relocate the block [i, i+h-1] to just after j.
///   InterSwap   exchange route_a position i with route_b position j.
///   InterInsert relocate route_a position i to route_b, just after j.
///   InterTwoOpt exchange the tail after position i of route_a with the tail
///               after position j of route_b.
///   Add         insert unvisited customer v into route_a just after j.
///   Drop        remove the node of route_a at position j.
struct Move {
    MoveKind kind = MoveKind::Swap;
    int route_a = 0;
    int route_b = 0;
    int i = 0;
    int j = 0;
    int h = 0;  // OrOpt block length, 2 or 3
    int v = 0;  // Add customer id
    double gain = 0.0;
};

/// Per-thread instrumentation. `gain_evals` counts evaluated neighboring
/// solutions (one per gain call, fast or naive); `ops` counts distance and
/// prefix-array reads made by the fast evaluators.
struct EvalStats {
    std::uint64_t gain_evals = 0;
    std::uint64_t ops = 0;
};

inline EvalStats& eval_stats() {
    thread_local EvalStats stats;
    return stats;
}

namespace detail {

[[noreturn]] inline void bad_move(const std::string& what) { throw std::out_of_range(what); }

inline void check_route(const Solution& sol, int k, const char* ctx) {
    if (k < 0 || k >= sol.num_routes()) bad_move(std::string(ctx) + ": route index out of bounds");
}

// Counted accessors used by the fast evaluators only.
inline double D(const Instance& inst, int u, int v) {
    ++eval_stats().ops;
    return inst.dist(u, v);
}
inline double VSD(const Solution& sol, int k, int i) {
    ++eval_stats().ops;
    return sol.prefixes[k].vsd[i];
}
inline double WSD(const Solution& sol, int k, int i) {
    ++eval_stats().ops;
    return sol.prefixes[k].wsd[i];
}
inline int node_at(const Solution& sol, int k, int pos) {
    return pos == 0 ? 0 : sol.routes[k][pos - 1];
}

inline double swap_gain(const Solution& sol, const Instance& inst, int k, int i, int j) {
    check_route(sol, k, "swap");
    const int m = sol.route_len(k);
    if (i < 1 || i > m || j < 1 || j > m) bad_move("swap: position out of bounds");
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    const int xi = node_at(sol, k, i), xj = node_at(sol, k, j);
    const int xim = node_at(sol, k, i - 1);
    double g = (m - i + 1) * (D(inst, xim, xi) - D(inst, xim, xj));
    if (j == i + 1) {
        if (j < m) {
            const int xjp = node_at(sol, k, j + 1);
            g += (m - j) * (D(inst, xj, xjp) - D(inst, xi, xjp));
        }
        return g;
    }
    const int xip = node_at(sol, k, i + 1);
    const int xjm = node_at(sol, k, j - 1);
    g += (m - i) * (D(inst, xi, xip) - D(inst, xj, xip));
    g += (m - j + 1) * (D(inst, xjm, xj) - D(inst, xjm, xi));
    if (j < m) {
        const int xjp = node_at(sol, k, j + 1);
        g += (m - j) * (D(inst, xj, xjp) - D(inst, xi, xjp));
    }
    return g;
}

inline double insert_gain(const Solution& sol, const Instance& inst, int k, int i, int j) {
    check_route(sol, k, "insert");
    const int m = sol.route_len(k);
    if (i < 1 || i > m || j < 0 || j > m) bad_move("insert: position out of bounds");
    if (j == i || j == i - 1) return 0.0;  // same slot
    const int v = node_at(sol, k, i);
    const int xim = node_at(sol, k, i - 1);
    const int xj = node_at(sol, k, j);
    if (j > i) {
        // v leaves position i and lands at position j; i+1..j shift back one.
        const int xip = node_at(sol, k, i + 1);
        double g = (m - i + 1) * (D(inst, xim, v) - D(inst, xim, xip));
        g += (m - i) * D(inst, v, xip);
        g -= VSD(sol, k, j) - VSD(sol, k, i + 1);
        g -= (m - j + 1) * D(inst, xj, v);
        if (j < m) {
            const int xjp = node_at(sol, k, j + 1);
            g -= (m - j) * (D(inst, v, xjp) - D(inst, xj, xjp));
        }
        return g;
    }
    // j < i-1: v lands at position j+1; j+1..i-1 shift forward one.
    const int xjp = node_at(sol, k, j + 1);
    double g = (m - j) * (D(inst, xj, xjp) - D(inst, xj, v));
    g -= (m - j - 1) * D(inst, v, xjp);
    g += VSD(sol, k, i - 1) - VSD(sol, k, j + 1);
    g += (m - i + 1) * D(inst, xim, v);
    if (i < m) {
        const int xip = node_at(sol, k, i + 1);
        g += (m - i) * (D(inst, v, xip) - D(inst, xim, xip));
    }
    return g;
}

inline double two_opt_gain(const Solution& sol, const Instance& inst, int k, int i, int j) {
    check_route(sol, k, "two_opt");
    const int m = sol.route_len(k);
    if (i < 1 || i > m || j < 1 || j > m) bad_move("two_opt: position out of bounds");
    if (i > j) std::swap(i, j);
    if (j < i + 2) bad_move("two_opt: removed edges must be non-adjacent");
    // Removes the edges ending at i and at j, reversing segment [i, j-1].
    const int xim = node_at(sol, k, i - 1), xi = node_at(sol, k, i);
    const int xjm = node_at(sol, k, j - 1), xj = node_at(sol, k, j);
    double dw = (m - i + 1) * (D(inst, xim, xjm) - D(inst, xim, xi));
    dw += (m - j + 1) * (D(inst, xi, xj) - D(inst, xjm, xj));
    dw += 2.0 * (WSD(sol, k, j - 1) - WSD(sol, k, i));
    dw -= static_cast<double>(i + j) * (VSD(sol, k, j - 1) - VSD(sol, k, i));
    return -dw;
}

inline double or_opt_gain(const Solution& sol, const Instance& inst, int k, int i, int h,
                          int j) {
    check_route(sol, k, "or_opt");
    const int m = sol.route_len(k);
    if (h != 2 && h != 3) bad_move("or_opt: block length must be 2 or 3");
    if (i < 1 || i + h - 1 > m) bad_move("or_opt: block out of bounds");
    if (j > m || j < 0) bad_move("or_opt: target slot out of bounds");
    if (j == i - 1) return 0.0;  // own slot
    if (j >= i && j < i + h) bad_move("or_opt: target slot inside the block");
    const int first = node_at(sol, k, i);
    const int last = node_at(sol, k, i + h - 1);
    const int xim = node_at(sol, k, i - 1);
    const int xj = node_at(sol, k, j);
    if (j >= i + h) {
        // Block lands so that it ends at position j; i+h..j shift back h.
        const int after = node_at(sol, k, i + h);
        double dw = (m - i + 1) * (D(inst, xim, after) - D(inst, xim, first));
        dw -= (m - i - h + 1) * D(inst, last, after);
        dw += static_cast<double>(i + h - j - 1) * (VSD(sol, k, i + h - 1) - VSD(sol, k, i));
        dw += static_cast<double>(h) * (VSD(sol, k, j) - VSD(sol, k, i + h));
        dw += (m - j + h) * D(inst, xj, first);
        if (j < m) {
            const int xjp = node_at(sol, k, j + 1);
            dw += (m - j) * (D(inst, last, xjp) - D(inst, xj, xjp));
        }
        return -dw;
    }
    // j <= i-2: block lands right after j; j+1..i-1 shift forward h.
    const int xjp = node_at(sol, k, j + 1);
    double dw = (m - j) * (D(inst, xj, first) - D(inst, xj, xjp));
    dw += (m - j - h) * D(inst, last, xjp);
    dw += static_cast<double>(i - j - 1) * (VSD(sol, k, i + h - 1) - VSD(sol, k, i));
    dw -= static_cast<double>(h) * (VSD(sol, k, i - 1) - VSD(sol, k, j + 1));
    dw -= (m - i + 1) * D(inst, xim, first);
    if (i + h - 1 < m) {
        const int after = node_at(sol, k, i + h);
        dw += (m - i - h + 1) * (D(inst, xim, after) - D(inst, last, after));
    }
    return -dw;
}

inline double inter_swap_gain(const Solution& sol, const Instance& inst, int a, int i, int b,
                              int j) {
    check_route(sol, a, "inter_swap");
    check_route(sol, b, "inter_swap");
    if (a == b) bad_move("inter_swap: routes must differ");
    const int ma = sol.route_len(a), mb = sol.route_len(b);
    if (i < 1 || i > ma || j < 1 || j > mb) bad_move("inter_swap: position out of bounds");
    const int u = node_at(sol, a, i), w = node_at(sol, b, j);
    const int uim = node_at(sol, a, i - 1), wjm = node_at(sol, b, j - 1);
    double g = (ma - i + 1) * (D(inst, uim, u) - D(inst, uim, w));
    if (i < ma) {
        const int uip = node_at(sol, a, i + 1);
        g += (ma - i) * (D(inst, u, uip) - D(inst, w, uip));
    }
    g += (mb - j + 1) * (D(inst, wjm, w) - D(inst, wjm, u));
    if (j < mb) {
        const int wjp = node_at(sol, b, j + 1);
        g += (mb - j) * (D(inst, w, wjp) - D(inst, u, wjp));
    }
    return g;
}

inline double inter_insert_gain(const Solution& sol, const Instance& inst, int a, int i, int b,
                                int j) {
    check_route(sol, a, "inter_insert");
    check_route(sol, b, "inter_insert");
    if (a == b) bad_move("inter_insert: routes must differ");
    const int ma = sol.route_len(a), mb = sol.route_len(b);
    if (mb < 1) bad_move("inter_insert: target route is empty");
    if (i < 1 || i > ma || j < 0 || j > mb) bad_move("inter_insert: position out of bounds");
    const int v = node_at(sol, a, i);
    const int uim = node_at(sol, a, i - 1);
    const int wj = node_at(sol, b, j);
    double g = VSD(sol, a, i - 1) + (ma + 1 - i) * D(inst, uim, v);
    if (i < ma) {
        const int uip = node_at(sol, a, i + 1);
        g += (ma - i) * (D(inst, v, uip) - D(inst, uim, uip));
    }
    g -= VSD(sol, b, j) + (mb + 1 - j) * D(inst, wj, v);
    if (j < mb) {
        const int wjp = node_at(sol, b, j + 1);
        g -= (mb - j) * (D(inst, v, wjp) - D(inst, wj, wjp));
    }
    return g;
}

inline double inter_two_opt_gain(const Solution& sol, const Instance& inst, int a, int i, int b,
                                 int j) {
    check_route(sol, a, "inter_two_opt");
    check_route(sol, b, "inter_two_opt");
    if (a == b) bad_move("inter_two_opt: routes must differ");
    const int ma = sol.route_len(a), mb = sol.route_len(b);
    if (i < 0 || i > ma || j < 0 || j > mb) bad_move("inter_two_opt: position out of bounds");
    const int alpha = ma - i, beta = mb - j;
    const int ui = node_at(sol, a, i), wj = node_at(sol, b, j);
    double g = static_cast<double>(alpha - beta) * VSD(sol, a, i) +
               static_cast<double>(beta - alpha) * VSD(sol, b, j);
    if (alpha > 0) {
        const int uip = node_at(sol, a, i + 1);
        g += alpha * (D(inst, ui, uip) - D(inst, wj, uip));
    }
    if (beta > 0) {
        const int wjp = node_at(sol, b, j + 1);
        g += beta * (D(inst, wj, wjp) - D(inst, ui, wjp));
    }
    return g;
}

inline double add_gain(const Solution& sol, const Instance& inst, int v, int k, int j) {
    check_route(sol, k, "add");
    const int m = sol.route_len(k);
    if (v < 1 || v > inst.n) bad_move("add: unknown customer id");
    if (j < 0 || j > m) bad_move("add: target slot out of bounds");
    if (!std::binary_search(sol.unvisited.begin(), sol.unvisited.end(), v))
        bad_move("add: customer already visited");
    const int xj = node_at(sol, k, j);
    double g = inst.profit(v) - VSD(sol, k, j) - (m + 1 - j) * D(inst, xj, v);
    if (j < m) {
        const int xjp = node_at(sol, k, j + 1);
        g -= (m - j) * (D(inst, v, xjp) - D(inst, xj, xjp));
    }
    return g;
}

inline double drop_gain(const Solution& sol, const Instance& inst, int k, int j) {
    check_route(sol, k, "drop");
    const int m = sol.route_len(k);
    if (j < 1 || j > m) bad_move("drop: position out of bounds");
    const int v = node_at(sol, k, j);
    const int xjm = node_at(sol, k, j - 1);
    double g = -inst.profit(v) + VSD(sol, k, j - 1) + (m - j + 1) * D(inst, xjm, v);
    if (j < m) {
        const int xjp = node_at(sol, k, j + 1);
        g += (m - j) * (D(inst, v, xjp) - D(inst, xjm, xjp));
    }
    return g;
}

inline double gain_impl(const Solution& sol, const Instance& inst, const Move& mv) {
    switch (mv.kind) {
        case MoveKind::Swap: return swap_gain(sol, inst, mv.route_a, mv.i, mv.j);
        case MoveKind::Insert: return insert_gain(sol, inst, mv.route_a, mv.i, mv.j);
        case MoveKind::TwoOpt: return two_opt_gain(sol, inst, mv.route_a, mv.i, mv.j);
        case MoveKind::OrOpt: return or_opt_gain(sol, inst, mv.route_a, mv.i, mv.h, mv.j);
        case MoveKind::InterSwap:
            return inter_swap_gain(sol, inst, mv.route_a, mv.i, mv.route_b, mv.j);
        case MoveKind::InterInsert:
            return inter_insert_gain(sol, inst, mv.route_a, mv.i, mv.route_b, mv.j);
        case MoveKind::InterTwoOpt:
            return inter_two_opt_gain(sol, inst, mv.route_a, mv.i, mv.route_b, mv.j);
        case MoveKind::Add: return add_gain(sol, inst, mv.v, mv.route_a, mv.j);
        case MoveKind::Drop: return drop_gain(sol, inst, mv.route_a, mv.j);
    }
    bad_move("unknown move kind");
}

/// Structural application only: no gain bookkeeping, prefixes of touched
/// routes rebuilt. Shared by apply_move and the naive evaluator.
inline void apply_structural(Solution& sol, const Instance& inst, const Move& mv) {
    auto& ra = sol.routes[mv.route_a];
    switch (mv.kind) {
        case MoveKind::Swap: {
            if (mv.i != mv.j) std::swap(ra[mv.i - 1], ra[mv.j - 1]);
            break;
        }
        case MoveKind::Insert: {
            if (mv.j == mv.i || mv.j == mv.i - 1) return;  // same slot
            const int v = ra[mv.i - 1];
            ra.erase(ra.begin() + (mv.i - 1));
            ra.insert(ra.begin() + (mv.j > mv.i ? mv.j - 1 : mv.j), v);
            break;
        }
        case MoveKind::TwoOpt: {
            int i = mv.i, j = mv.j;
            if (i > j) std::swap(i, j);
            std::reverse(ra.begin() + (i - 1), ra.begin() + (j - 1));
            break;
        }
        case MoveKind::OrOpt: {
            if (mv.j == mv.i - 1) return;
            std::vector<int> block(ra.begin() + (mv.i - 1), ra.begin() + (mv.i + mv.h - 1));
            ra.erase(ra.begin() + (mv.i - 1), ra.begin() + (mv.i + mv.h - 1));
            const int at = mv.j >= mv.i + mv.h ? mv.j - mv.h : mv.j;
            ra.insert(ra.begin() + at, block.begin(), block.end());
            break;
        }
        case MoveKind::InterSwap: {
            std::swap(ra[mv.i - 1], sol.routes[mv.route_b][mv.j - 1]);
            break;
        }
        case MoveKind::InterInsert: {
            auto& rb = sol.routes[mv.route_b];
            const int v = ra[mv.i - 1];
            ra.erase(ra.begin() + (mv.i - 1));
            rb.insert(rb.begin() + mv.j, v);
            break;
        }
        case MoveKind::InterTwoOpt: {
            auto& rb = sol.routes[mv.route_b];
            std::vector<int> tail_a(ra.begin() + mv.i, ra.end());
            std::vector<int> tail_b(rb.begin() + mv.j, rb.end());
            ra.resize(mv.i);
            ra.insert(ra.end(), tail_b.begin(), tail_b.end());
            rb.resize(mv.j);
            rb.insert(rb.end(), tail_a.begin(), tail_a.end());
            break;
        }
        case MoveKind::Add: {
            auto it = std::lower_bound(sol.unvisited.begin(), sol.unvisited.end(), mv.v);
            sol.unvisited.erase(it);
            ra.insert(ra.begin() + mv.j, mv.v);
            break;
        }
        case MoveKind::Drop: {
            const int v = ra[mv.j - 1];
            ra.erase(ra.begin() + (mv.j - 1));
            auto it = std::lower_bound(sol.unvisited.begin(), sol.unvisited.end(), v);
            sol.unvisited.insert(it, v);
            break;
        }
    }
    rebuild_route_prefixes(sol, inst, mv.route_a);
    if (mv.kind == MoveKind::InterSwap || mv.kind == MoveKind::InterInsert ||
        mv.kind == MoveKind::InterTwoOpt)
        rebuild_route_prefixes(sol, inst, mv.route_b);
}

}  // namespace detail

/// O(1) surrogate delta of one move. Both position legality and the gain
/// expression are validated against the recomputation oracle by the tests.
inline double gain_swap(const Solution& sol, const Instance& inst, int k, int i, int j) {
    ++eval_stats().gain_evals;
    return detail::swap_gain(sol, inst, k, i, j);
}
inline double gain_insert(const Solution& sol, const Instance& inst, int k, int i, int j) {
    ++eval_stats().gain_evals;
    return detail::insert_gain(sol, inst, k, i, j);
}
inline double gain_two_opt(const Solution& sol, const Instance& inst, int k, int i, int j) {
    ++eval_stats().gain_evals;
    return detail::two_opt_gain(sol, inst, k, i, j);
}
inline double gain_or_opt(const Solution& sol, const Instance& inst, int k, int i, int h,
                          int j) {
    ++eval_stats().gain_evals;
    return detail::or_opt_gain(sol, inst, k, i, h, j);
}
inline double gain_inter_swap(const Solution& sol, const Instance& inst, int a, int i, int b,
                              int j) {
    ++eval_stats().gain_evals;
    return detail::inter_swap_gain(sol, inst, a, i, b, j);
}
inline double gain_inter_insert(const Solution& sol, const Instance& inst, int a, int i, int b,
                                int j) {
    ++eval_stats().gain_evals;
    return detail::inter_insert_gain(sol, inst, a, i, b, j);
}
inline double gain_inter_two_opt(const Solution& sol, const Instance& inst, int a, int i,
                                 int b, int j) {
    ++eval_stats().gain_evals;
    return detail::inter_two_opt_gain(sol, inst, a, i, b, j);
}
inline double gain_add(const Solution& sol, const Instance& inst, int v, int k, int j) {
    ++eval_stats().gain_evals;
    return detail::add_gain(sol, inst, v, k, j);
}
inline double gain_drop(const Solution& sol, const Instance& inst, int k, int j) {
    ++eval_stats().gain_evals;
    return detail::drop_gain(sol, inst, k, j);
}

/// Dispatches on mv.kind and stores the gain into the move.
inline double evaluate_gain(const Solution& sol, const Instance& inst, Move& mv) {
    ++eval_stats().gain_evals;
    mv.gain = detail::gain_impl(sol, inst, mv);
    return mv.gain;
}

/// Slow path: clone, apply, recompute the unclipped objective from scratch.
/// Serves as the oracle for the fast evaluators and as the eval=naive mode.
inline double naive_gain(const Solution& sol, const Instance& inst, const Move& mv) {
    ++eval_stats().gain_evals;
    detail::gain_impl(sol, inst, mv);  // same legality checks as the fast path
    Solution clone = sol;
    detail::apply_structural(clone, inst, mv);
    return objective_surrogate(clone, inst) - objective_surrogate(sol, inst);
}

/// Applies an evaluated move: routes mutated, prefixes of the touched routes
/// rebuilt, the cached surrogate advanced by mv.gain, the unvisited set
/// updated. Throws if the stored gain no longer matches the solution.
inline void apply_move(Solution& sol, const Instance& inst, const Move& mv) {
    const EvalStats saved = eval_stats();
    const double expect = detail::gain_impl(sol, inst, mv);
    eval_stats() = saved;  // verification is not a visited neighbor
    if (std::abs(expect - mv.gain) > cache_tol(sol.surrogate))
        throw std::runtime_error(std::string("stale move: ") + kind_name(mv.kind) +
                                 " gain " + std::to_string(mv.gain) + " vs " +
                                 std::to_string(expect));
    detail::apply_structural(sol, inst, mv);
    sol.surrogate += mv.gain;
}

}  // namespace mtrpp

#endif
