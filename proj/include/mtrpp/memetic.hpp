#ifndef MTRPP_MEMETIC_HPP
#define MTRPP_MEMETIC_HPP

#include <chrono>
#include <functional>
#include <tuple>

#include "mtrpp/vns.hpp"

namespace mtrpp {

struct SolverConfig {
    enum class Mode : std::uint8_t { Ehsa, Ils, EhsaRbx };

    int limi = 2;    // stagnation limit
    int st = 11;     // perturbation strength
    int nump = 10;   // population size
    double t_max = 0;  // seconds; <= 0 resolves to 2*n at solve time
    std::uint64_t seed = 1;
    Mode mode = Mode::Ehsa;
    EvalMode eval = EvalMode::Fast;
    int q = 3;  // greedy construction candidate width
    bool first_improvement = false;
};

inline const char* mode_name(SolverConfig::Mode m) {
    switch (m) {
        case SolverConfig::Mode::Ehsa: return "ehsa";
        case SolverConfig::Mode::Ils: return "ils";
        case SolverConfig::Mode::EhsaRbx: return "ehsa-rbx";
    }
    return "?";
}

inline SolverConfig::Mode parse_mode(const std::string& s) {
    if (s == "ehsa") return SolverConfig::Mode::Ehsa;
    if (s == "ils") return SolverConfig::Mode::Ils;
    if (s == "ehsa-rbx") return SolverConfig::Mode::EhsaRbx;
    throw std::invalid_argument("unknown mode '" + s + "' (ehsa|ils|ehsa-rbx)");
}

inline EvalMode parse_eval_mode(const std::string& s) {
    if (s == "fast") return EvalMode::Fast;
    if (s == "naive") return EvalMode::Naive;
    throw std::invalid_argument("unknown eval mode '" + s + "' (fast|naive)");
}

inline void validate_config(const SolverConfig& cfg) {
    if (cfg.limi < 1) throw ValidationError("limi must be >= 1");
    if (cfg.st < 0) throw ValidationError("st must be >= 0");
    if (cfg.nump < 2) throw ValidationError("nump must be >= 2");
    if (cfg.q < 1) throw ValidationError("q must be >= 1");
}

/// Per-run record. The `result` part is a pure function of
/// (instance, config, seed); the timing fields are measurements.
struct RunReport {
    // result
    std::string instance;
    int n = 0, servers = 0;
    std::uint64_t seed = 0;
    std::string mode, eval;
    int limi = 0, st = 0, nump = 0, q = 0;
    double t_max = 0;
    double best_surrogate = 0, best_true = 0;
    bool negative_revenue = false;  // true and surrogate objective disagree
    std::vector<std::vector<int>> routes;
    std::vector<int> unvisited;
    // runtime measurements
    double time_to_best_s = 0, wall_s = 0;
    std::uint64_t generations = 0;
    std::uint64_t visited_neighbors = 0;
    std::uint64_t crossovers = 0;
    std::uint64_t perturbations = 0;
};

/// Random permutation of all customers split into K consecutive segments;
/// the first n mod K routes take the larger size.
inline Solution random_construct(const Instance& inst, Rng& rng) {
    Solution sol = make_empty_solution(inst);
    std::vector<int> perm(inst.n);
    for (int v = 1; v <= inst.n; ++v) perm[v - 1] = v;
    rng.shuffle(perm);
    const int base = inst.n / inst.servers;
    const int extra = inst.n % inst.servers;
    int at = 0;
    for (int k = 0; k < inst.servers; ++k) {
        const int len = base + (k < extra ? 1 : 0);
        sol.routes[k].assign(perm.begin() + at, perm.begin() + at + len);
        at += len;
    }
    sol.unvisited.clear();
    rebuild_prefixes(sol, inst);
    return sol;
}

/// Greedy randomized construction: repeatedly evaluates appending each
/// remaining customer to each route tail, keeps the q best appends and plays
/// one of them uniformly at random until every customer is placed. The
/// eval=naive ablation targets neighborhood exploration, so construction
/// always evaluates with the closed forms.
inline Solution greedy_construct(const Instance& inst, int q, Rng& rng) {
    Solution sol = make_empty_solution(inst);
    struct Cand {
        double gain;
        int v, k;
    };
    std::vector<Cand> cands;
    while (!sol.unvisited.empty()) {
        cands.clear();
        for (int v : sol.unvisited) {
            for (int k = 0; k < inst.servers; ++k) {
                Move mv;
                mv.kind = MoveKind::Add;
                mv.v = v;
                mv.route_a = k;
                mv.j = sol.route_len(k);
                cands.push_back({evaluate_gain(sol, inst, mv), v, k});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.gain != b.gain) return a.gain > b.gain;
            return std::tie(a.v, a.k) < std::tie(b.v, b.k);
        });
        const int width = std::min<int>(q, static_cast<int>(cands.size()));
        const Cand& pick = cands[rng.uniform_index(width)];
        Move mv;
        mv.kind = MoveKind::Add;
        mv.v = pick.v;
        mv.route_a = pick.k;
        mv.j = sol.route_len(pick.k);
        mv.gain = pick.gain;
        apply_move(sol, inst, mv);
    }
    return sol;
}

/// St random in-route relocations, then every unvisited customer appended to
/// the tail of a random route.
inline Solution spert(Solution sol, const Instance& inst, int st, Rng& rng,
                      std::uint64_t* count = nullptr) {
    for (int t = 0; t < st; ++t) {
        std::vector<int> nonempty;
        for (int k = 0; k < sol.num_routes(); ++k)
            if (sol.route_len(k) > 0) nonempty.push_back(k);
        if (nonempty.empty()) break;
        const int k = nonempty[rng.uniform_index(static_cast<int>(nonempty.size()))];
        const int m = sol.route_len(k);
        Move mv;
        mv.kind = MoveKind::Insert;
        mv.route_a = k;
        mv.i = static_cast<int>(rng.uniform_int(1, m));
        mv.j = static_cast<int>(rng.uniform_int(0, m));
        evaluate_gain(sol, inst, mv);
        apply_move(sol, inst, mv);
        if (count) ++*count;
    }
    while (!sol.unvisited.empty()) {
        const int v = sol.unvisited[rng.uniform_index(static_cast<int>(sol.unvisited.size()))];
        const int k = rng.uniform_index(sol.num_routes());
        Move mv;
        mv.kind = MoveKind::Add;
        mv.v = v;
        mv.route_a = k;
        mv.j = sol.route_len(k);
        evaluate_gain(sol, inst, mv);
        apply_move(sol, inst, mv);
    }
    return sol;
}

namespace detail {

struct VertexPos {
    int route = -1;
    int index = -1;  // 0-based index into the route vector
};

inline VertexPos find_vertex(const Solution& sol, int v) {
    for (int k = 0; k < sol.num_routes(); ++k) {
        const auto& r = sol.routes[k];
        for (int idx = 0; idx < static_cast<int>(r.size()); ++idx)
            if (r[idx] == v) return {k, idx};
    }
    return {};
}

}  // namespace detail

/// Observable internals of one abx call, for tests.
struct AbxTrace {
    std::vector<Arc> selected;  // the replayed half of pb's non-shared arcs
    std::vector<int> removed;   // customers taken out of the offspring for relocation
};

/// Arc-based crossover. Copies parent pa, then replays a random half of pb's
/// non-shared arcs into the copy; endpoints of arcs shared by both parents
/// are protected from removal or relocation.
inline Solution abx(const Solution& pa, const Solution& pb, const Instance& inst, Rng& rng,
                    AbxTrace* trace = nullptr) {
    Solution off = pa;
    const auto arcs_a = arc_set(pa);
    const auto arcs_b = arc_set(pb);

    std::vector<char> vf(static_cast<size_t>(inst.n) + 1, 0);  // protected
    std::vector<char> vo(static_cast<size_t>(inst.n) + 1, 0);  // currently visited
    for (const auto& route : pa.routes)
        for (int v : route) vo[v] = 1;
    {
        std::vector<Arc> shared;
        std::set_intersection(arcs_a.begin(), arcs_a.end(), arcs_b.begin(), arcs_b.end(),
                              std::back_inserter(shared));
        for (const auto& [a, b] : shared) {
            if (a != 0) vf[a] = 1;
            vf[b] = 1;
        }
    }

    std::vector<Arc> nonshared;  // pb route order, then shuffled
    for (const auto& route : pb.routes) {
        int prev = 0;
        for (int v : route) {
            const Arc arc{prev, v};
            if (!std::binary_search(arcs_a.begin(), arcs_a.end(), arc)) nonshared.push_back(arc);
            prev = v;
        }
    }
    rng.shuffle(nonshared);
    const size_t take = nonshared.size() / 2;
    if (trace)
        trace->selected.assign(nonshared.begin(), nonshared.begin() + take);

    auto remove_vertex = [&](int v) {
        if (trace) trace->removed.push_back(v);
        const auto pos = detail::find_vertex(off, v);
        off.routes[pos.route].erase(off.routes[pos.route].begin() + pos.index);
    };
    auto insert_after = [&](int anchor, int v) {
        const auto pos = detail::find_vertex(off, anchor);
        off.routes[pos.route].insert(off.routes[pos.route].begin() + pos.index + 1, v);
    };
    auto insert_before = [&](int anchor, int v) {
        const auto pos = detail::find_vertex(off, anchor);
        off.routes[pos.route].insert(off.routes[pos.route].begin() + pos.index, v);
    };

    for (size_t t = 0; t < take; ++t) {
        const auto [a, b] = nonshared[t];
        if (a == 0) {
            // Depot arcs only ever reposition b: the depot itself is fixed.
            if (!vo[b]) {
                const int k = rng.uniform_index(off.num_routes());
                off.routes[k].insert(off.routes[k].begin(), b);
                vo[b] = 1;
            } else if (!vf[b]) {
                remove_vertex(b);
                const int k = rng.uniform_index(off.num_routes());
                off.routes[k].insert(off.routes[k].begin(), b);
            }
            vf[b] = 1;
            continue;
        }
        if (!vo[a] && !vo[b]) {
            const int k = rng.uniform_index(off.num_routes());
            off.routes[k].push_back(a);
            off.routes[k].push_back(b);
            vo[a] = vo[b] = 1;
        } else if (vo[a] && !vo[b]) {
            insert_after(a, b);
            vo[b] = 1;
        } else if (!vo[a] && vo[b]) {
            insert_before(b, a);
            vo[a] = 1;
        } else if (!vf[b]) {
            remove_vertex(b);
            insert_after(a, b);
        } else if (!vf[a]) {
            remove_vertex(a);
            insert_before(b, a);
        }
        vf[a] = vf[b] = 1;
    }

    rebuild_unvisited(off, inst);
    rebuild_prefixes(off, inst);
    return off;
}

/// Route-based crossover: one random route of pa is replaced by one random
/// route of pb; customers duplicated by the transplant leave their old spots.
inline Solution rbx(const Solution& pa, const Solution& pb, const Instance& inst, Rng& rng) {
    Solution off = pa;
    const int r = rng.uniform_index(off.num_routes());
    const int s = rng.uniform_index(pb.num_routes());
    const std::vector<int>& transplant = pb.routes[s];
    std::vector<char> dup(static_cast<size_t>(inst.n) + 1, 0);
    for (int v : transplant) dup[v] = 1;
    for (int k = 0; k < off.num_routes(); ++k) {
        if (k == r) continue;
        auto& route = off.routes[k];
        route.erase(std::remove_if(route.begin(), route.end(), [&](int v) { return dup[v]; }),
                    route.end());
    }
    off.routes[r] = transplant;
    rebuild_unvisited(off, inst);
    rebuild_prefixes(off, inst);
    return off;
}

struct Population {
    std::vector<Solution> members;
    std::vector<std::vector<Arc>> arcs;  // cached arc sets, same order

    int size() const { return static_cast<int>(members.size()); }
};

/// Admits cand if its arc set differs from every member and it beats the
/// worst member; the worst member is then replaced. Returns whether admitted.
inline bool pool_update(Population& pop, const Solution& cand) {
    const auto cand_arcs = arc_set(cand);
    for (const auto& a : pop.arcs)
        if (a == cand_arcs) return false;
    int worst = 0;
    for (int i = 1; i < pop.size(); ++i)
        if (pop.members[i].surrogate < pop.members[worst].surrogate) worst = i;
    if (cand.surrogate <= pop.members[worst].surrogate) return false;
    pop.members[worst] = cand;
    pop.arcs[worst] = cand_arcs;
    return true;
}

/// ceil(Nump/2) randomized + floor(Nump/2) greedy constructions, each refined
/// by vns. Duplicate arc sets are re-generated a bounded number of times and
/// finally admitted after a perturbation (tiny instances may not have Nump
/// distinct local optima). `observer` sees each member as it is admitted.
inline Population init_pool(const Instance& inst, const SolverConfig& cfg, Rng& rng,
                            const std::function<void(const Solution&)>& observer = nullptr,
                            std::chrono::steady_clock::time_point deadline =
                                std::chrono::steady_clock::time_point::max()) {
    SearchOpts opts;
    opts.eval = cfg.eval;
    opts.first_improvement = cfg.first_improvement;
    opts.deadline = deadline;
    Population pop;
    const int nrand = (cfg.nump + 1) / 2;
    constexpr int kRetries = 10;
    for (int slot = 0; slot < cfg.nump; ++slot) {
        Solution member;
        bool distinct = false;
        for (int attempt = 0; attempt < kRetries && !distinct; ++attempt) {
            member = slot < nrand ? random_construct(inst, rng)
                                  : greedy_construct(inst, cfg.q, rng);
            vns(member, inst, rng, opts);
            distinct = true;
            const auto member_arcs = arc_set(member);
            for (const auto& a : pop.arcs)
                if (a == member_arcs) {
                    distinct = false;
                    break;
                }
        }
        if (!distinct) {
            member = spert(std::move(member), inst, cfg.st, rng);
            vns(member, inst, rng, opts);
        }
        pop.arcs.push_back(arc_set(member));
        pop.members.push_back(std::move(member));
        if (observer) observer(pop.members.back());
    }
    return pop;
}

/// Wall-clock budget: explicit when set, otherwise twice the customer count.
inline double resolve_t_max(const SolverConfig& cfg, int n) {
    return cfg.t_max > 0 ? cfg.t_max : 2.0 * n;
}

/// Full memetic search. Initializes the pool, then repeats until the time
/// budget runs out: recombine two random members (or restart from one member
/// in ils mode), alternate vns and perturbation until `limi` consecutive
/// non-improving rounds, and offer the inner-loop best to the pool.
inline RunReport ehsa_solve(const Instance& inst, const SolverConfig& cfg) {
    validate_config(cfg);
    const double t_max = resolve_t_max(cfg, inst.n);
    Rng rng(cfg.seed);

    const auto start = std::chrono::steady_clock::now();
    SearchOpts opts;
    opts.eval = cfg.eval;
    opts.first_improvement = cfg.first_improvement;
    opts.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(t_max));
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    const std::uint64_t evals_before = eval_stats().gain_evals;

    RunReport rep;
    rep.instance = inst.name;
    rep.n = inst.n;
    rep.servers = inst.servers;
    rep.seed = cfg.seed;
    rep.mode = mode_name(cfg.mode);
    rep.eval = eval_mode_name(cfg.eval);
    rep.limi = cfg.limi;
    rep.st = cfg.st;
    rep.nump = cfg.nump;
    rep.q = cfg.q;
    rep.t_max = t_max;

    // Plateau guard: equal-objective solutions reached later differ from the
    // incumbent only by cache noise, and must not displace it.
    Solution best;
    bool have_best = false;
    auto offer_best = [&](const Solution& s) {
        if (!have_best || s.surrogate > best.surrogate + cache_tol(best.surrogate)) {
            best = s;
            have_best = true;
            rep.time_to_best_s = elapsed();
        }
    };

    Population pop = init_pool(inst, cfg, rng, offer_best, opts.deadline);

    while (elapsed() < t_max) {
        int stall = 0;
        Solution cur;
        if (cfg.mode == SolverConfig::Mode::Ils) {
            cur = pop.members[rng.uniform_index(pop.size())];
        } else {
            const int ia = rng.uniform_index(pop.size());
            int ib = rng.uniform_index(pop.size() - 1);
            if (ib >= ia) ++ib;
            cur = cfg.mode == SolverConfig::Mode::Ehsa
                      ? abx(pop.members[ia], pop.members[ib], inst, rng)
                      : rbx(pop.members[ia], pop.members[ib], inst, rng);
            ++rep.crossovers;
        }
        Solution local_best = cur;
        do {
            vns(cur, inst, rng, opts);
            if (cur.surrogate > local_best.surrogate) {
                local_best = cur;
                stall = 0;
            } else {
                ++stall;
            }
            offer_best(cur);
            if (elapsed() >= t_max) break;
            cur = spert(std::move(cur), inst, cfg.st, rng, &rep.perturbations);
        } while (stall < cfg.limi);
        pool_update(pop, local_best);
        ++rep.generations;
    }

    rep.best_surrogate = objective_surrogate(best, inst);  // from scratch, not the cache
    rep.best_true = objective_true(best, inst);
    rep.negative_revenue = rep.best_true - rep.best_surrogate > cache_tol(rep.best_true);
    rep.routes = best.routes;
    rep.unvisited = best.unvisited;
    rep.wall_s = elapsed();
    rep.visited_neighbors = eval_stats().gain_evals - evals_before;
    return rep;
}

}  // namespace mtrpp

#endif
