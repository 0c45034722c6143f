#include <gtest/gtest.h>

#include "mtrpp/io.hpp"
#include "mtrpp/memetic.hpp"
#include "mtrpp/oracle.hpp"
#include "test_util.hpp"

using namespace mtrpp;
using mtrpp::test::l3a;
using mtrpp::test::random_solution;
using mtrpp::test::solution_of;

TEST(RandomConstruct, BalancedSplitSizes) {
    Rng rng(1);
    const Instance a = gen_instance(10, 3, 100.0, 1);
    const Solution sa = random_construct(a, rng);
    EXPECT_EQ(sa.route_len(0), 4);
    EXPECT_EQ(sa.route_len(1), 3);
    EXPECT_EQ(sa.route_len(2), 3);
    EXPECT_TRUE(sa.unvisited.empty());
    EXPECT_TRUE(validate_solution(sa, a).ok);

    const Instance b = gen_instance(6, 2, 100.0, 2);
    const Solution sb = random_construct(b, rng);
    EXPECT_EQ(sb.route_len(0), 3);
    EXPECT_EQ(sb.route_len(1), 3);
}

TEST(RandomConstruct, DeterministicUnderFixedSeed) {
    const Instance inst = gen_instance(20, 3, 100.0, 3);
    Rng r1(5), r2(5);
    EXPECT_EQ(random_construct(inst, r1).routes, random_construct(inst, r2).routes);
}

TEST(GreedyConstruct, LineInstanceGreedyTrace) {
    // Appending greedily with q=1: gains 18, then 7, then 1.
    const Instance inst = l3a();
    Rng rng(1);
    const Solution s = greedy_construct(inst, 1, rng);
    const std::vector<int> want{2, 1, 3};
    EXPECT_EQ(s.routes[0], want);
    EXPECT_DOUBLE_EQ(s.surrogate, 26.0);
    EXPECT_TRUE(s.unvisited.empty());
}

TEST(GreedyConstruct, WideCandidateSetMakesFirstPlacementUniform) {
    const Instance inst = l3a();
    std::array<int, 4> first_counts{};  // customer 1..3
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        Rng rng(static_cast<std::uint64_t>(t));
        const Solution s = greedy_construct(inst, inst.n * inst.servers, rng);
        // With K=1 the first appended customer is the head of the route.
        ++first_counts[s.routes[0][0]];
    }
    // Uniform over 3 candidates: expect ~3333 each; 5 sigma ~ 235.
    for (int v = 1; v <= 3; ++v) {
        EXPECT_NEAR(first_counts[v], trials / 3.0, 300.0) << "customer " << v;
    }
}

TEST(GreedyConstruct, PlacesEveryCustomer) {
    Rng rng(4);
    const Instance inst = gen_instance(37, 4, 100.0, 9);
    const Solution s = greedy_construct(inst, 3, rng);
    EXPECT_TRUE(s.unvisited.empty());
    EXPECT_TRUE(validate_solution(s, inst).ok);
}

TEST(Spert, NoOpOnZeroStrengthFullSolution) {
    Rng rng(5);
    const Instance inst = gen_instance(15, 2, 100.0, 11);
    const Solution s = random_construct(inst, rng);
    const Solution p = spert(s, inst, 0, rng);
    EXPECT_EQ(p.routes, s.routes);
}

TEST(Spert, FillsUnvisitedAndStaysValid) {
    Rng rng(6);
    const Instance inst = gen_instance(20, 3, 100.0, 12);
    Solution s = random_solution(inst, rng, 0.5);
    const Solution p = spert(std::move(s), inst, 11, rng);
    EXPECT_TRUE(p.unvisited.empty());
    const Verdict v = validate_solution(p, inst);
    EXPECT_TRUE(v.ok) << v.message;
}

TEST(Spert, ReproducibleUnderFixedSeed) {
    const Instance inst = gen_instance(18, 2, 100.0, 13);
    Rng c(7);
    const Solution s = random_solution(inst, c, 0.6);
    Rng r1(9), r2(9);
    EXPECT_EQ(spert(s, inst, 11, r1).routes, spert(s, inst, 11, r2).routes);
}

TEST(Abx, IdenticalParentsReproduceThemselves) {
    Rng rng(8);
    const Instance inst = gen_instance(16, 2, 100.0, 14);
    Solution p = random_solution(inst, rng, 0.8);
    Rng xr(3);
    const Solution off = abx(p, p, inst, xr);
    EXPECT_EQ(off.routes, p.routes);
}

TEST(Abx, RelocationCaseTrace) {
    // Parents {(0,1,2),(0,3)} and {(0,2,1),(0,3)}: one non-shared arc is
    // replayed. Selecting (2,1) relocates customer 1 to follow customer 2.
    const Instance inst = l3a(2);
    const Solution pa = solution_of(inst, {{1, 2}, {3}});
    const Solution pb = solution_of(inst, {{2, 1}, {3}});
    const std::vector<int> relocated{2, 1};
    bool seen_trace = false;
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        Rng rng(seed);
        const Solution off = abx(pa, pb, inst, rng);
        EXPECT_TRUE(validate_solution(off, inst).ok);
        if (off.routes[0] == relocated && off.routes[1] == std::vector<int>{3}) {
            seen_trace = true;
            EXPECT_TRUE(off.unvisited.empty());
        }
    }
    EXPECT_TRUE(seen_trace);
}

TEST(Abx, VisitedSetIsParentPlusSelectedEndpoints) {
    Rng rng(9);
    for (int t = 0; t < 30; ++t) {
        const Instance inst = gen_instance(20, 3, 100.0, 600 + t);
        Solution pa = random_solution(inst, rng, 0.6);
        Solution pb = random_solution(inst, rng, 0.6);
        AbxTrace trace;
        Rng xr(t);
        const Solution off = abx(pa, pb, inst, xr, &trace);
        const Verdict v = validate_solution(off, inst);
        ASSERT_TRUE(v.ok) << v.message;

        std::vector<char> want(inst.n + 1, 0);
        for (const auto& r : pa.routes)
            for (int c : r) want[c] = 1;
        for (const auto& [a, b] : trace.selected) {
            if (a != 0) want[a] = 1;
            want[b] = 1;
        }
        std::vector<char> got(inst.n + 1, 0);
        for (const auto& r : off.routes)
            for (int c : r) got[c] = 1;
        EXPECT_EQ(got, want);
    }
}

TEST(Abx, ProtectedEndpointsAreNeverRemovedOrRelocated) {
    Rng rng(10);
    for (int t = 0; t < 30; ++t) {
        const Instance inst = gen_instance(18, 2, 100.0, 700 + t);
        Solution pa = random_solution(inst, rng, 0.7);
        Solution pb = random_solution(inst, rng, 0.7);
        // Protected set: endpoints of shared arcs.
        const auto arcs_a = arc_set(pa);
        const auto arcs_b = arc_set(pb);
        std::vector<Arc> shared;
        std::set_intersection(arcs_a.begin(), arcs_a.end(), arcs_b.begin(), arcs_b.end(),
                              std::back_inserter(shared));
        std::vector<char> vf(inst.n + 1, 0);
        for (const auto& [a, b] : shared) {
            if (a != 0) vf[a] = 1;
            vf[b] = 1;
        }
        AbxTrace trace;
        Rng xr(100 + t);
        abx(pa, pb, inst, xr, &trace);
        for (int moved : trace.removed) EXPECT_FALSE(vf[moved]) << "customer " << moved;
    }
}

TEST(Rbx, IdenticalParentsSingleRouteReproduce) {
    Rng rng(11);
    const Instance inst = gen_instance(12, 1, 100.0, 15);
    const Solution p = random_solution(inst, rng, 0.8);
    Rng xr(1);
    const Solution off = rbx(p, p, inst, xr);
    EXPECT_EQ(off.routes, p.routes);
}

TEST(Rbx, DisjointTransplantDeletesNothing) {
    const Instance inst = gen_instance(8, 2, 100.0, 16);
    const Solution pa = solution_of(inst, {{1, 2}, {3, 4}});
    const Solution pb = solution_of(inst, {{5, 6}, {7, 8}});
    Rng xr(2);
    const Solution off = rbx(pa, pb, inst, xr);
    EXPECT_TRUE(validate_solution(off, inst).ok);
    int total = off.visited_count();
    EXPECT_EQ(total, 4);  // one pa route kept plus a disjoint two-customer route
}

TEST(Rbx, RandomParentsYieldValidOffspring) {
    Rng rng(12);
    for (int t = 0; t < 50; ++t) {
        const Instance inst = gen_instance(20, 3, 100.0, 800 + t);
        Solution pa = random_solution(inst, rng, 0.7);
        Solution pb = random_solution(inst, rng, 0.7);
        Rng xr(t);
        const Solution off = rbx(pa, pb, inst, xr);
        const Verdict v = validate_solution(off, inst);
        ASSERT_TRUE(v.ok) << v.message;
    }
}

TEST(PoolUpdate, DuplicateArcSetRejected) {
    const Instance inst = gen_instance(10, 2, 100.0, 17);
    Rng rng(3);
    Population pop;
    for (int i = 0; i < 3; ++i) {
        pop.members.push_back(random_solution(inst, rng, 0.6));
        pop.arcs.push_back(arc_set(pop.members.back()));
    }
    Solution cand = pop.members[1];
    cand.surrogate += 100;  // better, but structurally identical
    EXPECT_FALSE(pool_update(pop, cand));
}

TEST(PoolUpdate, WorseThanAllRejected) {
    const Instance inst = gen_instance(10, 2, 100.0, 18);
    Rng rng(4);
    Population pop;
    for (int i = 0; i < 3; ++i) {
        pop.members.push_back(random_solution(inst, rng, 0.6));
        pop.arcs.push_back(arc_set(pop.members.back()));
    }
    Solution cand = make_empty_solution(inst);
    cand.surrogate = -1e18;
    double worst = pop.members[0].surrogate;
    for (const auto& m : pop.members) worst = std::min(worst, m.surrogate);
    cand.surrogate = worst - 1;
    EXPECT_FALSE(pool_update(pop, cand));
}

TEST(PoolUpdate, DistinctAndBetterReplacesWorst) {
    const Instance inst = gen_instance(10, 2, 100.0, 19);
    Rng rng(5);
    Population pop;
    for (int i = 0; i < 3; ++i) {
        pop.members.push_back(random_solution(inst, rng, 0.6));
        pop.arcs.push_back(arc_set(pop.members.back()));
    }
    int worst = 0;
    for (int i = 1; i < pop.size(); ++i)
        if (pop.members[i].surrogate < pop.members[worst].surrogate) worst = i;
    Solution cand = random_solution(inst, rng, 0.9);
    cand.surrogate = pop.members[worst].surrogate + 1;  // structurally distinct, better
    ASSERT_NE(arc_set(cand), pop.arcs[worst]);
    EXPECT_TRUE(pool_update(pop, cand));
    EXPECT_EQ(pop.size(), 3);
    EXPECT_EQ(pop.arcs[worst], arc_set(cand));
}

TEST(InitPool, SplitRuleAndFixpoints) {
    const Instance inst = gen_instance(14, 2, 100.0, 20);
    SolverConfig cfg;
    cfg.nump = 10;
    Rng rng(6);
    Population pop = init_pool(inst, cfg, rng);
    EXPECT_EQ(pop.size(), 10);
    double best = -1e18;
    for (auto& m : pop.members) {
        const Verdict v = validate_solution(m, inst);
        EXPECT_TRUE(v.ok) << v.message;
        Solution probe = m;
        Rng r2(12345);
        vns(probe, inst, r2);
        EXPECT_DOUBLE_EQ(probe.surrogate, m.surrogate);  // already a vns fixpoint
        best = std::max(best, m.surrogate);
    }
    EXPECT_GE(best, pop.members[0].surrogate);
}

TEST(Ehsa, DeterministicReports) {
    const Instance inst = gen_instance(12, 2, 100.0, 21);
    SolverConfig cfg;
    cfg.seed = 3;
    cfg.t_max = 0.3;
    const RunReport a = ehsa_solve(inst, cfg);
    const RunReport b = ehsa_solve(inst, cfg);
    EXPECT_EQ(result_json(a).dump(), result_json(b).dump());
}

TEST(Ehsa, LineInstanceOptimal) {
    const Instance inst = l3a();
    SolverConfig cfg;
    cfg.seed = 1;
    cfg.t_max = 1.0;
    const RunReport rep = ehsa_solve(inst, cfg);
    EXPECT_DOUBLE_EQ(rep.best_true, 30.0);
    EXPECT_DOUBLE_EQ(rep.best_surrogate, 30.0);
    EXPECT_LE(rep.time_to_best_s, 1.0);
}

TEST(Ehsa, IlsModeNeverCrossesOver) {
    const Instance inst = gen_instance(15, 2, 100.0, 22);
    SolverConfig cfg;
    cfg.mode = SolverConfig::Mode::Ils;
    cfg.t_max = 0.3;
    const RunReport rep = ehsa_solve(inst, cfg);
    EXPECT_EQ(rep.crossovers, 0u);
    EXPECT_GT(rep.generations, 0u);
}

TEST(Ehsa, RbxModeRuns) {
    const Instance inst = gen_instance(15, 2, 100.0, 23);
    SolverConfig cfg;
    cfg.mode = SolverConfig::Mode::EhsaRbx;
    cfg.t_max = 0.3;
    const RunReport rep = ehsa_solve(inst, cfg);
    EXPECT_GT(rep.crossovers, 0u);
    EXPECT_EQ(rep.mode, "ehsa-rbx");
}

TEST(Ehsa, ObjectivesAgreeOnEuclidean) {
    const Instance inst = gen_instance(20, 2, 100.0, 24);
    SolverConfig cfg;
    cfg.t_max = 0.4;
    const RunReport rep = ehsa_solve(inst, cfg);
    EXPECT_FALSE(rep.negative_revenue);
    EXPECT_EQ(rep.best_true, rep.best_surrogate);
}

TEST(Ehsa, DefaultBudgetIsTwiceTheCustomerCount) {
    SolverConfig cfg;  // t_max unset
    const Instance small = gen_instance(1, 1, 100.0, 25);
    const RunReport rep = ehsa_solve(small, cfg);
    EXPECT_DOUBLE_EQ(rep.t_max, 2.0);
    EXPECT_DOUBLE_EQ(resolve_t_max(cfg, 200), 400.0);
}

TEST(Config, InvalidValuesRejected) {
    SolverConfig cfg;
    cfg.limi = 0;
    EXPECT_THROW(validate_config(cfg), ValidationError);
    cfg.limi = 2;
    cfg.nump = 1;
    EXPECT_THROW(validate_config(cfg), ValidationError);
    cfg.nump = 10;
    cfg.st = -1;
    EXPECT_THROW(validate_config(cfg), ValidationError);
}
