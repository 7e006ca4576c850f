#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "normsched/analysis.hpp"
#include "normsched/instances.hpp"
#include "normsched/solver.hpp"

using namespace normsched;

namespace {

Dyadic dy(const char* s) { return Dyadic::parse(s); }

Instance independent_jobs(int n) {
    std::vector<Job> jobs;
    for (int i = 0; i < n; ++i) jobs.push_back({i, 0, std::nullopt});
    return Instance(std::move(jobs));
}

} // namespace

TEST_CASE("grid_dp_solve on J_0") {
    Instance j0 = make_jp(0);
    SolveResult k1 = grid_dp_solve(j0, 1);
    REQUIRE(k1.status == SolveStatus::Optimal);
    CHECK(k1.optimal_value == dy("13/2"));
    CHECK(k1.schedule.completion_time(3) == dy("5/2"));
    CHECK(partition_feasible(j0, k1.partition).ok());
    CHECK(schedule_metrics(k1.schedule).total_completion_time == k1.optimal_value);

    SolveResult k2 = grid_dp_solve(j0, 2);
    REQUIRE(k2.status == SolveStatus::Optimal);
    CHECK(k2.optimal_value == dy("13/2"));  // refinement does not improve
}

TEST_CASE("grid_dp_solve trivial cases") {
    SolveResult one = grid_dp_solve(independent_jobs(1), 0);
    REQUIRE(one.status == SolveStatus::Optimal);
    CHECK(one.optimal_value == dy("1"));

    SUBCASE("horizon too small reports infeasible") {
        GridOptions opts;
        opts.horizon = Dyadic(1);
        SolveResult r = grid_dp_solve(independent_jobs(3), 1, opts);
        CHECK(r.status == SolveStatus::Infeasible);
    }
    SUBCASE("released late") {
        Instance late({{0, 2, std::nullopt}});
        SolveResult r = grid_dp_solve(late, 1);
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(r.optimal_value == dy("3"));
    }
}

TEST_CASE("enumerate_structures") {
    SUBCASE("one job yields exactly one structure") {
        int count = 0;
        enumerate_structures(independent_jobs(1), {}, [&](const EventStructure& s) {
            ++count;
            CHECK(s.blocks == 1);
            CHECK(s.start_block[0] == 0);
            CHECK(s.completion_block[0] == 0);
            return true;
        });
        CHECK(count == 1);
    }
    SUBCASE("two independent jobs, two blocks: hand count") {
        EnumOptions opts;
        opts.max_blocks = 2;
        int count = 0;
        enumerate_structures(independent_jobs(2), opts, [&](const EventStructure&) {
            ++count;
            return true;
        });
        // one single-block structure plus seven witnessed two-block patterns
        CHECK(count == 8);
    }
    SUBCASE("precedence forces disjoint spans") {
        Instance chain({{0, 0, 1}, {1, 0, std::nullopt}});
        enumerate_structures(chain, {}, [&](const EventStructure& s) {
            CHECK(s.start_block[1] > s.completion_block[0]);
            return true;
        });
    }
    SUBCASE("budget cuts the stream short") {
        EnumOptions opts;
        opts.max_structures = 3;
        int count = 0;
        bool complete = enumerate_structures(independent_jobs(3), opts, [&](const EventStructure&) {
            ++count;
            return true;
        });
        CHECK_FALSE(complete);
        CHECK(count == 3);
    }
}

TEST_CASE("structure_to_lp") {
    SUBCASE("single job in one block") {
        EventStructure s{1, {0}, {0}};
        LpSolution sol = solve_lp(structure_to_lp(independent_jobs(1), s));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.value == Rational(1));
        CHECK(sol.assignment[0] == Rational(1));  // e_1
    }
    SUBCASE("the derived P_0 structure reproduces 13/2") {
        Instance j0 = make_jp(0);
        // canonical realized P_0: events (0,1/2,1,3/2,5/2)
        EventStructure s{4, {0, 0, 1, 3}, {1, 2, 2, 3}};
        LpSolution sol = solve_lp(structure_to_lp(j0, s));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(sol.value == Rational(13, 2));
    }
    SUBCASE("a_4 forced before its release is infeasible") {
        Instance j0 = make_jp(0);
        EventStructure s{2, {0, 0, 0, 0}, {0, 0, 0, 1}};
        LpSolution sol = solve_lp(structure_to_lp(j0, s));
        CHECK(sol.status == LpStatus::Infeasible);
    }
}

TEST_CASE("solve_exact") {
    SUBCASE("J_0 is certified at 13/2 and lint-clean") {
        Instance j0 = make_jp(0);
        SolveResult r = solve_exact(j0);
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(r.certified);
        CHECK(r.optimal_value == dy("13/2"));
        CHECK(r.schedule.completion_time(3) == dy("5/2"));
        CHECK(lint(j0, r.partition).empty());
    }
    SUBCASE("a forced chain serializes") {
        Instance chain({{0, 0, 1}, {1, 0, std::nullopt}});
        SolveResult r = solve_exact(chain);
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(r.optimal_value == dy("3"));
    }
    SUBCASE("thread count does not change the value") {
        Instance j0 = make_jp(0);
        ExactOptions one;
        ExactOptions four;
        four.threads = 4;
        CHECK(solve_exact(j0, one).optimal_value == solve_exact(j0, four).optimal_value);
    }
    SUBCASE("structural prunes are conservative") {
        for (std::uint64_t seed : {3ULL, 8ULL, 21ULL}) {
            Instance inst = random_intree(3, 1, seed);
            ExactOptions pruned;
            ExactOptions open;
            open.enumeration.prune_cardinality = false;
            open.spanning_constraints = false;
            SolveResult a = solve_exact(inst, pruned);
            SolveResult b = solve_exact(inst, open);
            REQUIRE(a.status == SolveStatus::Optimal);
            REQUIRE(b.status == SolveStatus::Optimal);
            CHECK(a.optimal_value == b.optimal_value);
        }
    }
}

TEST_CASE("grid refinement is monotone and bounded by the exact value") {
    for (std::uint64_t seed : {5ULL, 12ULL, 33ULL}) {
        Instance inst = random_intree(3, 1, seed * 19);
        SolveResult exact = solve_exact(inst);
        REQUIRE(exact.status == SolveStatus::Optimal);
        Dyadic prev;
        for (unsigned k = 0; k <= 6; ++k) {
            SolveResult g = grid_dp_solve(inst, k);
            REQUIRE(g.status == SolveStatus::Optimal);
            if (k > 0) CHECK(g.optimal_value <= prev);
            CHECK(g.optimal_value >= exact.optimal_value);
            prev = g.optimal_value;
        }
        CHECK(prev == exact.optimal_value);  // stabilized by K = 2n
    }
}

TEST_CASE("a_4 tail-work lower bound holds on solver outputs") {
    for (int p = 0; p <= 1; ++p) {
        Instance jp = make_jp(p);
        SolveResult g = grid_dp_solve(jp, static_cast<unsigned>(p) + 1);
        REQUIRE(g.status == SolveStatus::Optimal);
        const Dyadic threshold = Dyadic(1) - Dyadic(BigInt(1), static_cast<unsigned>(p) + 1);
        CHECK(g.schedule.work_from(4 * p + 3, Dyadic(2 * p + 2)) >= threshold);
    }
}

TEST_CASE("preemption counts of solver optima are reported") {
    Instance j0 = make_jp(0);
    SolveResult r = solve_exact(j0);
    REQUIRE(r.status == SolveStatus::Optimal);
    int total = 0;
    for (const Job& j : j0.jobs()) total += count_preemptions(r.schedule, j.id);
    // normal optima need at most 2n-1 preemptions in total
    if (!abnormality_point(r.partition))
        CHECK(total <= 2 * j0.size() - 1);
    MESSAGE("total preemptions on J_0 optimum: " << total);
}
