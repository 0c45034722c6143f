#include <gtest/gtest.h>

#include "mtrpp/moves.hpp"
#include "mtrpp/oracle.hpp"
#include "test_util.hpp"

using namespace mtrpp;
using mtrpp::test::l3a;
using mtrpp::test::l3b;
using mtrpp::test::random_move;
using mtrpp::test::random_solution;
using mtrpp::test::solution_of;

namespace {

double tol_for(const Solution& sol) { return cache_tol(sol.surrogate); }

// Inverse of an applied move, for the involution checks.
Move inverse_of(const Move& mv, const Solution& before) {
    Move inv = mv;
    switch (mv.kind) {
        case MoveKind::Swap:
        case MoveKind::TwoOpt:
        case MoveKind::InterSwap:
        case MoveKind::InterTwoOpt:
            return inv;  // self-inverse
        case MoveKind::Insert:
            if (mv.j == mv.i || mv.j == mv.i - 1) return inv;  // identity
            if (mv.j > mv.i) {
                inv.i = mv.j;
                inv.j = mv.i - 1;
            } else {
                inv.i = mv.j + 1;
                inv.j = mv.i;
            }
            return inv;
        case MoveKind::OrOpt:
            if (mv.j == mv.i - 1) return inv;  // identity
            if (mv.j >= mv.i + mv.h) {
                inv.i = mv.j - mv.h + 1;
                inv.j = mv.i - 1;
            } else {
                inv.i = mv.j + 1;
                inv.j = mv.i + mv.h - 1;
            }
            return inv;
        case MoveKind::InterInsert:
            inv.route_a = mv.route_b;
            inv.route_b = mv.route_a;
            inv.i = mv.j + 1;
            inv.j = mv.i - 1;
            return inv;
        case MoveKind::Add:
            inv.kind = MoveKind::Drop;
            inv.j = mv.j + 1;
            return inv;
        case MoveKind::Drop:
            inv.kind = MoveKind::Add;
            inv.v = before.routes[mv.route_a][mv.j - 1];
            inv.j = mv.j - 1;
            return inv;
    }
    return inv;
}

}  // namespace

// --- hand-checked gains on the line instances ------------------------------

TEST(GainSwap, AdjacentHandChecked) {
    const Instance inst = l3a();
    Solution s = solution_of(inst, {{2, 1, 3}});
    EXPECT_DOUBLE_EQ(s.surrogate, 26.0);
    Move mv{MoveKind::Swap, 0, 0, 1, 2, 0, 0, 0.0};
    EXPECT_DOUBLE_EQ(evaluate_gain(s, inst, mv), 4.0);  // 3*(2-1) + 1*(2-1)
    apply_move(s, inst, mv);
    const std::vector<int> want{1, 2, 3};
    EXPECT_EQ(s.routes[0], want);
    EXPECT_DOUBLE_EQ(s.surrogate, 30.0);
}

TEST(GainSwap, IdentityIsZero) {
    const Instance inst = l3a();
    const Solution s = solution_of(inst, {{2, 1, 3}});
    EXPECT_DOUBLE_EQ(gain_swap(s, inst, 0, 2, 2), 0.0);
}

TEST(GainSwap, NonAdjacentMatchesOracle) {
    const Instance inst = l3a();
    const Solution s = solution_of(inst, {{1, 2, 3}});
    Move mv{MoveKind::Swap, 0, 0, 1, 3, 0, 0, 0.0};
    const GainCheck c = check_gain(s, inst, mv);
    EXPECT_NEAR(c.fast, c.naive, tol_for(s));
    EXPECT_DOUBLE_EQ(c.fast, -6.0);  // (0,3,2,1) scores 24
}

TEST(GainInsert, RelocateHandChecked) {
    const Instance inst = l3a();
    Solution s = solution_of(inst, {{2, 1, 3}});
    Move mv{MoveKind::Insert, 0, 0, 1, 2, 0, 0, 0.0};  // customer 2 between 1 and 3
    EXPECT_DOUBLE_EQ(evaluate_gain(s, inst, mv), 4.0);
    apply_move(s, inst, mv);
    const std::vector<int> want{1, 2, 3};
    EXPECT_EQ(s.routes[0], want);
    EXPECT_DOUBLE_EQ(s.surrogate, 30.0);
}

TEST(GainInsert, SameSlotIsZero) {
    const Instance inst = l3a();
    const Solution s = solution_of(inst, {{2, 1, 3}});
    EXPECT_DOUBLE_EQ(gain_insert(s, inst, 0, 2, 1), 0.0);
    EXPECT_DOUBLE_EQ(gain_insert(s, inst, 0, 2, 2), 0.0);
}

TEST(GainInsert, SingleCustomerRouteIsZero) {
    const Instance inst = l3a(2);
    const Solution s = solution_of(inst, {{1}, {2, 3}});
    EXPECT_DOUBLE_EQ(gain_insert(s, inst, 0, 1, 0), 0.0);
    EXPECT_DOUBLE_EQ(gain_insert(s, inst, 0, 1, 1), 0.0);
}

TEST(GainTwoOpt, HandChecked) {
    const Instance inst = l3a();
    Solution s = solution_of(inst, {{2, 1, 3}});
    Move mv{MoveKind::TwoOpt, 0, 0, 1, 3, 0, 0, 0.0};  // drop edges (0,2) and (1,3)
    EXPECT_DOUBLE_EQ(evaluate_gain(s, inst, mv), 4.0);
    apply_move(s, inst, mv);
    const std::vector<int> want{1, 2, 3};
    EXPECT_EQ(s.routes[0], want);
}

TEST(GainTwoOpt, AllPointsCoincidentIsZero) {
    Instance inst;
    inst.name = "coincident";
    inst.n = 4;
    inst.servers = 1;
    inst.profits = {5, 5, 5, 5};
    inst.coords.assign(5, {1.0, 1.0});
    inst.has_coords = true;
    fill_distances_from_coords(inst);
    validate_instance(inst);
    const Solution s = solution_of(inst, {{1, 2, 3, 4}});
    EXPECT_DOUBLE_EQ(gain_two_opt(s, inst, 0, 1, 3), 0.0);
    EXPECT_DOUBLE_EQ(gain_two_opt(s, inst, 0, 2, 4), 0.0);
}

TEST(GainOrOpt, BlockToFrontHandChecked) {
    const Instance inst = l3a();
    Solution s = solution_of(inst, {{3, 1, 2}});
    EXPECT_DOUBLE_EQ(s.surrogate, 22.0);
    Move mv{MoveKind::OrOpt, 0, 0, 2, 0, 2, 0, 0.0};  // block (1,2) to the front
    EXPECT_DOUBLE_EQ(evaluate_gain(s, inst, mv), 8.0);
    apply_move(s, inst, mv);
    const std::vector<int> want{1, 2, 3};
    EXPECT_EQ(s.routes[0], want);
    EXPECT_DOUBLE_EQ(s.surrogate, 30.0);
}

TEST(GainOrOpt, OwnSlotIsZero) {
    const Instance inst = l3a();
    const Solution s = solution_of(inst, {{1, 2, 3}});
    EXPECT_DOUBLE_EQ(gain_or_opt(s, inst, 0, 2, 2, 1), 0.0);
}

TEST(GainInterSwap, HandChecked) {
    const Instance inst = l3a(2);
    Solution s = solution_of(inst, {{1}, {2, 3}});
    EXPECT_DOUBLE_EQ(s.surrogate, 30.0);
    Move mv{MoveKind::InterSwap, 0, 1, 1, 2, 0, 0, 0.0};  // swap customers 1 and 3
    EXPECT_DOUBLE_EQ(evaluate_gain(s, inst, mv), -2.0);   // (d01-d03)+(d23-d21)
    apply_move(s, inst, mv);
    EXPECT_DOUBLE_EQ(s.surrogate, 28.0);
}

TEST(GainInterSwap, TwinCustomersIsZero) {
    // Customers 1 and 2 share a location and a profit: swapping them changes
    // nothing.
    Instance inst;
    inst.name = "twins";
    inst.n = 3;
    inst.servers = 2;
    inst.profits = {7, 7, 4};
    inst.coords = {{0, 0}, {2, 1}, {2, 1}, {5, 0}};
    inst.has_coords = true;
    fill_distances_from_coords(inst);
    validate_instance(inst);
    const Solution s = solution_of(inst, {{1, 3}, {2}});
    EXPECT_DOUBLE_EQ(gain_inter_swap(s, inst, 0, 1, 1, 1), 0.0);
}

TEST(GainInterInsert, ToTailHandChecked) {
    const Instance inst = l3a(2);
    Solution s = solution_of(inst, {{1}, {2, 3}});
    Move mv{MoveKind::InterInsert, 0, 1, 1, 2, 0, 0, 0.0};  // 1 to tail of route 2
    EXPECT_DOUBLE_EQ(evaluate_gain(s, inst, mv), -4.0);
    apply_move(s, inst, mv);
    EXPECT_TRUE(s.routes[0].empty());
    const std::vector<int> want{2, 3, 1};
    EXPECT_EQ(s.routes[1], want);
    EXPECT_DOUBLE_EQ(s.surrogate, 26.0);
}

TEST(GainInterInsert, ThereAndBackNetsZero) {
    const Instance inst = gen_instance(12, 2, 100.0, 3);
    Rng rng(5);
    Solution s = random_solution(inst, rng);
    while (s.route_len(0) < 2 || s.route_len(1) < 2) s = random_solution(inst, rng);
    const double f0 = s.surrogate;
    const auto routes0 = s.routes;
    Move out{MoveKind::InterInsert, 0, 1, 1, 2, 0, 0, 0.0};
    evaluate_gain(s, inst, out);
    apply_move(s, inst, out);
    Move back = inverse_of(out, s);
    evaluate_gain(s, inst, back);
    apply_move(s, inst, back);
    EXPECT_EQ(s.routes, routes0);
    EXPECT_NEAR(s.surrogate, f0, tol_for(s));
}

TEST(GainInterTwoOpt, TailExchangeHandChecked) {
    const Instance inst = l3a(2);
    Solution s = solution_of(inst, {{1}, {2, 3}});
    Move mv{MoveKind::InterTwoOpt, 0, 1, 0, 1, 0, 0, 0.0};
    EXPECT_DOUBLE_EQ(evaluate_gain(s, inst, mv), -2.0);
    apply_move(s, inst, mv);
    const std::vector<int> ra{3}, rb{2, 1};
    EXPECT_EQ(s.routes[0], ra);
    EXPECT_EQ(s.routes[1], rb);
    EXPECT_DOUBLE_EQ(s.surrogate, 28.0);
}

TEST(GainInterTwoOpt, EmptyTailsIsZero) {
    const Instance inst = l3a(2);
    const Solution s = solution_of(inst, {{1}, {2, 3}});
    EXPECT_DOUBLE_EQ(gain_inter_two_opt(s, inst, 0, 1, 1, 2), 0.0);
}

TEST(GainAdd, TailHandChecked) {
    const Instance inst = l3a();
    Solution s = solution_of(inst, {{1, 2}});
    EXPECT_DOUBLE_EQ(s.surrogate, 27.0);
    Move mv{MoveKind::Add, 0, 0, 0, 2, 0, 3, 0.0};
    EXPECT_DOUBLE_EQ(evaluate_gain(s, inst, mv), 3.0);  // 6 - vsd(2) - d(2,3)
    apply_move(s, inst, mv);
    EXPECT_DOUBLE_EQ(s.surrogate, 30.0);
    EXPECT_TRUE(s.unvisited.empty());
}

TEST(GainAdd, ZeroProfitTailAddNeverGains) {
    Instance inst = gen_instance(10, 2, 100.0, 9);
    inst.profits[4] = 0.0;  // customer 5
    Rng rng(2);
    Solution s = random_solution(inst, rng, 0.5);
    while (!std::binary_search(s.unvisited.begin(), s.unvisited.end(), 5))
        s = random_solution(inst, rng, 0.5);
    int longest = 0;
    for (int k = 1; k < s.num_routes(); ++k)
        if (s.route_len(k) > s.route_len(longest)) longest = k;
    EXPECT_LE(gain_add(s, inst, 5, longest, s.route_len(longest)), 0.0);
}

TEST(GainDrop, HandChecked) {
    const Instance inst = l3b();
    Solution s = solution_of(inst, {{1, 2, 3}});
    EXPECT_DOUBLE_EQ(s.surrogate, 26.0);
    Move mv{MoveKind::Drop, 0, 0, 0, 3, 0, 0, 0.0};
    EXPECT_DOUBLE_EQ(evaluate_gain(s, inst, mv), 1.0);
    apply_move(s, inst, mv);
    EXPECT_DOUBLE_EQ(s.surrogate, 27.0);
    EXPECT_EQ(s.unvisited, std::vector<int>{3});
}

TEST(GainDrop, ProfitEqualsDistanceIsZero) {
    // Sole customer with p = d(0, v): dropping nets exactly zero.
    Instance inst = mtrpp::test::line_instance({1.0}, 1, "pd");
    const Solution s = solution_of(inst, {{1}});
    EXPECT_DOUBLE_EQ(gain_drop(s, inst, 0, 1), 0.0);
}

// --- oracle equivalence, applications, and involutions ---------------------

TEST(OracleEquivalence, AllKindsOnRandomInstances) {
    Rng rng(20250809);
    for (int t = 0; t < 25; ++t) {
        const int n = 10 + static_cast<int>(rng.uniform_int(0, 40));
        const int k = 1 + static_cast<int>(rng.uniform_int(0, 3));
        const Instance inst = gen_instance(n, k, 100.0, 1000 + t);
        const Solution sol = random_solution(inst, rng);
        for (MoveKind kind : mtrpp::test::kAllKinds) {
            for (int m = 0; m < 40; ++m) {
                const auto mv = random_move(sol, kind, rng);
                if (!mv) break;
                const GainCheck c = check_gain(sol, inst, *mv);
                ASSERT_LE(c.discrepancy, tol_for(sol))
                    << kind_name(kind) << " i=" << mv->i << " j=" << mv->j << " h=" << mv->h
                    << " v=" << mv->v;
            }
        }
    }
}

TEST(OracleEquivalence, ThousandRandomSwapsAndTailExchanges) {
    Rng rng(77);
    const Instance inst = gen_instance(40, 3, 100.0, 42);
    const Solution sol = random_solution(inst, rng);
    int done = 0;
    while (done < 1000) {
        const auto mv = random_move(sol, MoveKind::Swap, rng);
        ASSERT_TRUE(mv.has_value());
        ASSERT_LE(check_gain(sol, inst, *mv).discrepancy, tol_for(sol));
        ++done;
    }
    done = 0;
    while (done < 1000) {
        const auto mv = random_move(sol, MoveKind::InterTwoOpt, rng);
        ASSERT_TRUE(mv.has_value());
        ASSERT_LE(check_gain(sol, inst, *mv).discrepancy, tol_for(sol));
        ++done;
    }
}

TEST(NaiveGain, IdentityMovesAreExactlyZero) {
    const Instance inst = gen_instance(15, 2, 100.0, 6);
    Rng rng(8);
    const Solution sol = random_solution(inst, rng);
    for (int k = 0; k < sol.num_routes(); ++k) {
        const int m = sol.route_len(k);
        for (int i = 1; i <= m; ++i) {
            Move mv{MoveKind::Insert, k, 0, i, i - 1, 0, 0, 0.0};
            EXPECT_EQ(naive_gain(sol, inst, mv), 0.0);
            Move sw{MoveKind::Swap, k, 0, i, i, 0, 0, 0.0};
            EXPECT_EQ(naive_gain(sol, inst, sw), 0.0);
        }
    }
}

TEST(ApplyMove, PreservesPartitionAndCaches) {
    Rng rng(303);
    const Instance inst = gen_instance(30, 3, 100.0, 13);
    Solution sol = random_solution(inst, rng);
    for (int t = 0; t < 300; ++t) {
        const MoveKind kind = mtrpp::test::kAllKinds[rng.uniform_index(9)];
        auto mv = random_move(sol, kind, rng);
        if (!mv) continue;
        evaluate_gain(sol, inst, *mv);
        apply_move(sol, inst, *mv);
        const Verdict v = validate_solution(sol, inst);
        ASSERT_TRUE(v.ok) << v.message << " after " << kind_name(kind);
        ASSERT_NEAR(sol.surrogate, objective_surrogate(sol, inst), tol_for(sol));
    }
}

TEST(ApplyMove, InverseRestoresSolution) {
    Rng rng(404);
    const Instance inst = gen_instance(24, 3, 100.0, 14);
    for (int t = 0; t < 400; ++t) {
        Solution sol = random_solution(inst, rng);
        const MoveKind kind = mtrpp::test::kAllKinds[rng.uniform_index(9)];
        auto mv = random_move(sol, kind, rng);
        if (!mv) continue;
        // The spec keeps inter-insert off empty target routes, so the inverse
        // of emptying a one-customer route is not itself a legal move.
        if (kind == MoveKind::InterInsert && sol.route_len(mv->route_a) < 2) continue;
        const auto routes0 = sol.routes;
        const auto unvisited0 = sol.unvisited;
        const double f0 = sol.surrogate;
        Move inv = inverse_of(*mv, sol);
        evaluate_gain(sol, inst, *mv);
        apply_move(sol, inst, *mv);
        evaluate_gain(sol, inst, inv);
        apply_move(sol, inst, inv);
        ASSERT_EQ(sol.routes, routes0) << kind_name(kind) << " i=" << mv->i << " j=" << mv->j;
        ASSERT_EQ(sol.unvisited, unvisited0);
        ASSERT_NEAR(sol.surrogate, f0, tol_for(sol));
    }
}

TEST(ApplyMove, StaleMoveRejected) {
    const Instance inst = l3a();
    Solution s = solution_of(inst, {{2, 1, 3}});
    Move mv{MoveKind::Swap, 0, 0, 1, 2, 0, 0, 0.0};
    evaluate_gain(s, inst, mv);
    apply_move(s, inst, mv);  // solution changed; the stored gain is stale now
    EXPECT_THROW(apply_move(s, inst, mv), std::runtime_error);
}

TEST(Errors, IllegalPositionsThrow) {
    const Instance inst = l3a(2);
    const Solution s = solution_of(inst, {{1, 2}, {3}});
    EXPECT_THROW(gain_swap(s, inst, 0, 1, 5), std::out_of_range);
    EXPECT_THROW(gain_two_opt(s, inst, 0, 1, 2), std::out_of_range);  // adjacent edges
    EXPECT_THROW(gain_add(s, inst, 2, 0, 0), std::out_of_range);      // already visited
    EXPECT_THROW(gain_drop(s, inst, 1, 2), std::out_of_range);
    EXPECT_THROW(gain_or_opt(s, inst, 0, 1, 4, 0), std::out_of_range);  // h must be 2 or 3
    EXPECT_THROW(gain_inter_insert(s, inst, 0, 1, 0, 0), std::out_of_range);  // same route
}

TEST(CheckGain, CorruptedPrefixCacheDetected) {
    const Instance inst = gen_instance(20, 2, 100.0, 21);
    Rng rng(31);
    Solution sol = random_solution(inst, rng);
    while (sol.route_len(0) < 3 || sol.route_len(1) < 1) sol = random_solution(inst, rng);
    Move mv{MoveKind::InterInsert, 0, 1, 2, 1, 0, 0, 0.0};
    EXPECT_LE(check_gain(sol, inst, mv).discrepancy, tol_for(sol));
    sol.prefixes[0].vsd[1] += 1.0;  // fault injection: the formula reads vsd[i-1]
    EXPECT_GT(check_gain(sol, inst, mv).discrepancy, 0.5);
}

// Fast evaluators touch a bounded number of distances and prefix entries, no
// matter how long the route is.
TEST(ConstantTime, OpCountsIndependentOfRouteLength) {
    Rng rng(99);
    std::array<std::uint64_t, 9> budget{};
    for (const int n : {10, 100, 1000}) {
        const Instance inst = gen_instance(n, 2, 100.0, 50 + n);
        Solution sol;
        sol.routes.assign(2, {});
        for (int v = 1; v <= n; ++v) sol.routes[v % 2].push_back(v);
        for (auto& r : sol.routes) r.pop_back();  // leave two customers unvisited
        rebuild_unvisited(sol, inst);
        rebuild_prefixes(sol, inst);
        for (size_t ki = 0; ki < mtrpp::test::kAllKinds.size(); ++ki) {
            const MoveKind kind = mtrpp::test::kAllKinds[ki];
            std::uint64_t worst = 0;
            for (int t = 0; t < 50; ++t) {
                const auto mv = random_move(sol, kind, rng);
                ASSERT_TRUE(mv.has_value());
                Move probe = *mv;
                const std::uint64_t before = eval_stats().ops;
                evaluate_gain(sol, inst, probe);
                worst = std::max(worst, eval_stats().ops - before);
            }
            if (n == 10) {
                budget[ki] = worst;
            } else {
                EXPECT_LE(worst, budget[ki] + 2)
                    << kind_name(kind) << ": op count grew with route length (n=" << n << ")";
            }
            EXPECT_LE(worst, 12u) << kind_name(kind);
        }
    }
}
