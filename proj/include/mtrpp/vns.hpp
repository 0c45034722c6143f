#ifndef MTRPP_VNS_HPP
#define MTRPP_VNS_HPP

#include <array>
#include <chrono>

#include "mtrpp/moves.hpp"
#include "mtrpp/rng.hpp"

namespace mtrpp {

enum class NeighborhoodId : std::uint8_t {
    N1_Swap,
    N2_Insert,
    N3_TwoOpt,
    N4_OrOpt,
    N5_InterSwap,
    N6_InterInsert,
    N7_InterTwoOpt,
    NAdd,
    NDrop,
};

enum class EvalMode : std::uint8_t { Fast, Naive };

inline const char* eval_mode_name(EvalMode m) { return m == EvalMode::Fast ? "fast" : "naive"; }

struct SearchOpts {
    EvalMode eval = EvalMode::Fast;
    bool first_improvement = false;  // default: best improvement per sweep
    double min_gain = 1e-9;          // strict improvement threshold
    // Hard wall-clock bound; sweeps poll it periodically and wind down early.
    std::chrono::steady_clock::time_point deadline =
        std::chrono::steady_clock::time_point::max();
};

inline bool past_deadline(const SearchOpts& opts) {
    return opts.deadline != std::chrono::steady_clock::time_point::max() &&
           std::chrono::steady_clock::now() >= opts.deadline;
}

namespace detail {

/// Enumerates every legal candidate of one neighborhood in canonical
/// (route, position) order. Empty routes take part only in Add and
/// Inter-2-opt. Returns early when the callback returns true.
template <class F>
void for_each_move(const Solution& sol, NeighborhoodId nb, F&& emit) {
    const int K = sol.num_routes();
    Move mv;
    switch (nb) {
        case NeighborhoodId::N1_Swap:
            mv.kind = MoveKind::Swap;
            for (int k = 0; k < K; ++k) {
                const int m = sol.route_len(k);
                mv.route_a = k;
                for (int i = 1; i < m; ++i)
                    for (int j = i + 1; j <= m; ++j) {
                        mv.i = i;
                        mv.j = j;
                        if (emit(mv)) return;
                    }
            }
            break;
        case NeighborhoodId::N2_Insert:
            mv.kind = MoveKind::Insert;
            for (int k = 0; k < K; ++k) {
                const int m = sol.route_len(k);
                mv.route_a = k;
                for (int i = 1; i <= m; ++i)
                    for (int j = 0; j <= m; ++j) {
                        if (j == i || j == i - 1) continue;
                        mv.i = i;
                        mv.j = j;
                        if (emit(mv)) return;
                    }
            }
            break;
        case NeighborhoodId::N3_TwoOpt:
            mv.kind = MoveKind::TwoOpt;
            for (int k = 0; k < K; ++k) {
                const int m = sol.route_len(k);
                mv.route_a = k;
                for (int i = 1; i + 2 <= m; ++i)
                    for (int j = i + 2; j <= m; ++j) {
                        mv.i = i;
                        mv.j = j;
                        if (emit(mv)) return;
                    }
            }
            break;
        case NeighborhoodId::N4_OrOpt:
            mv.kind = MoveKind::OrOpt;
            for (int k = 0; k < K; ++k) {
                const int m = sol.route_len(k);
                mv.route_a = k;
                for (int h = 2; h <= 3; ++h) {
                    mv.h = h;
                    for (int i = 1; i + h - 1 <= m; ++i) {
                        mv.i = i;
                        for (int j = 0; j <= m; ++j) {
                            if (j >= i - 1 && j < i + h) continue;  // own slot or inside block
                            mv.j = j;
                            if (emit(mv)) return;
                        }
                    }
                }
            }
            break;
        case NeighborhoodId::N5_InterSwap:
            mv.kind = MoveKind::InterSwap;
            for (int a = 0; a < K; ++a)
                for (int b = a + 1; b < K; ++b) {
                    mv.route_a = a;
                    mv.route_b = b;
                    const int ma = sol.route_len(a), mb = sol.route_len(b);
                    for (int i = 1; i <= ma; ++i)
                        for (int j = 1; j <= mb; ++j) {
                            mv.i = i;
                            mv.j = j;
                            if (emit(mv)) return;
                        }
                }
            break;
        case NeighborhoodId::N6_InterInsert:
            mv.kind = MoveKind::InterInsert;
            for (int a = 0; a < K; ++a)
                for (int b = 0; b < K; ++b) {
                    if (a == b || sol.route_len(b) == 0) continue;
                    mv.route_a = a;
                    mv.route_b = b;
                    const int ma = sol.route_len(a), mb = sol.route_len(b);
                    for (int i = 1; i <= ma; ++i)
                        for (int j = 0; j <= mb; ++j) {
                            mv.i = i;
                            mv.j = j;
                            if (emit(mv)) return;
                        }
                }
            break;
        case NeighborhoodId::N7_InterTwoOpt:
            mv.kind = MoveKind::InterTwoOpt;
            for (int a = 0; a < K; ++a)
                for (int b = a + 1; b < K; ++b) {
                    mv.route_a = a;
                    mv.route_b = b;
                    const int ma = sol.route_len(a), mb = sol.route_len(b);
                    for (int i = 0; i <= ma; ++i)
                        for (int j = 0; j <= mb; ++j) {
                            if (i == ma && j == mb) continue;  // both tails empty
                            mv.i = i;
                            mv.j = j;
                            if (emit(mv)) return;
                        }
                }
            break;
        case NeighborhoodId::NAdd:
            mv.kind = MoveKind::Add;
            for (int v : sol.unvisited) {
                mv.v = v;
                for (int k = 0; k < K; ++k) {
                    mv.route_a = k;
                    const int m = sol.route_len(k);
                    for (int j = 0; j <= m; ++j) {
                        mv.j = j;
                        if (emit(mv)) return;
                    }
                }
            }
            break;
        case NeighborhoodId::NDrop:
            mv.kind = MoveKind::Drop;
            for (int k = 0; k < K; ++k) {
                mv.route_a = k;
                const int m = sol.route_len(k);
                for (int j = 1; j <= m; ++j) {
                    mv.j = j;
                    if (emit(mv)) return;
                }
            }
            break;
    }
}

}  // namespace detail

/// Hill-climbs one neighborhood to a local optimum. Best improvement per full
/// sweep (ties broken by enumeration order, i.e. lowest route/position);
/// sweeps repeat until no move clears the strict gain threshold. Returns
/// whether the solution improved.
inline bool local_search(Solution& sol, const Instance& inst, NeighborhoodId nb,
                         const SearchOpts& opts = {}) {
    bool improved_any = false;
    bool timed_out = false;
    std::uint32_t tick = 0;
    for (;;) {
        Move best;
        best.gain = opts.min_gain;
        bool found = false;
        detail::for_each_move(sol, nb, [&](Move& mv) {
            if (((++tick) & 0x3FFu) == 0 && past_deadline(opts)) {
                timed_out = true;
                return true;
            }
            const double g = opts.eval == EvalMode::Fast ? evaluate_gain(sol, inst, mv)
                                                         : (mv.gain = naive_gain(sol, inst, mv));
            if (g > best.gain) {
                best = mv;
                found = true;
                if (opts.first_improvement) return true;
            }
            return false;
        });
        if (found) {
            apply_move(sol, inst, best);
            improved_any = true;
        }
        if (!found || timed_out) break;
    }
    return improved_any;
}

/// Refines to a solution locally optimal for all nine neighborhoods: snapshot
/// the objective, run Add first, then the seven reordering neighborhoods in
/// random order with a Drop pass after each, and repeat while the objective
/// improves. Never decreases the surrogate objective.
inline void vns(Solution& sol, const Instance& inst, Rng& rng, const SearchOpts& opts = {}) {
    using N = NeighborhoodId;
    for (;;) {
        const double before = sol.surrogate;
        local_search(sol, inst, N::NAdd, opts);
        std::array<N, 7> pool{N::N1_Swap,      N::N2_Insert,      N::N3_TwoOpt, N::N4_OrOpt,
                              N::N5_InterSwap, N::N6_InterInsert, N::N7_InterTwoOpt};
        for (int remaining = 7; remaining > 0; --remaining) {
            const int pick = rng.uniform_index(remaining);
            const N nb = pool[pick];
            pool[pick] = pool[remaining - 1];
            local_search(sol, inst, nb, opts);
            local_search(sol, inst, N::NDrop, opts);
        }
        if (sol.surrogate <= before + opts.min_gain || past_deadline(opts)) break;
    }
}

}  // namespace mtrpp

#endif
