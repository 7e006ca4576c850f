#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "normsched/bench.hpp"
#include "normsched/instances.hpp"
#include "normsched/transform.hpp"

using namespace normsched;

namespace {

Dyadic dy(const char* s) { return Dyadic::parse(s); }

Instance independent_jobs(int n) {
    std::vector<Job> jobs;
    for (int i = 0; i < n; ++i) jobs.push_back({i, 0, std::nullopt});
    return Instance(std::move(jobs));
}

Dyadic total_of(const Instance& inst, const BlockPartition& p) {
    return schedule_metrics(realize(inst, p)).total_completion_time;
}

} // namespace

TEST_CASE("cyclic_shift") {
    SUBCASE("two-block exchange") {
        Instance inst = independent_jobs(2);
        BlockPartition p;
        p.events = {dy("0"), dy("1"), dy("2")};
        p.xi = {{{0, dy("1/2")}, {1, dy("1/2")}}, {{0, dy("1/2")}, {1, dy("1/2")}}};
        CycleSpec spec{{1, 2}, {0, 1}, dy("1/4")};
        auto result = cyclic_shift(inst, p, spec);
        auto* ok = std::get_if<BlockPartition>(&result);
        REQUIRE(ok != nullptr);
        CHECK(ok->amount(0, 0) == dy("1/4"));
        CHECK(ok->amount(0, 1) == dy("3/4"));
        CHECK(ok->amount(1, 0) == dy("3/4"));
        CHECK(ok->amount(1, 1) == dy("1/4"));
        // totals and block lengths survive
        CHECK(ok->job_total(0) == dy("1"));
        CHECK(ok->job_total(1) == dy("1"));
        CHECK(ok->events == p.events);
    }
    SUBCASE("zero epsilon is rejected") {
        Instance inst = independent_jobs(2);
        BlockPartition p;
        p.events = {dy("0"), dy("1"), dy("2")};
        p.xi = {{{0, dy("1")}}, {{1, dy("1")}}};
        CycleSpec spec{{1, 2}, {0, 1}, dy("0")};
        CHECK(std::holds_alternative<TransformError>(cyclic_shift(inst, p, spec)));
    }
    SUBCASE("moving a job before its release is reported") {
        Instance inst({{0, 0, std::nullopt}, {1, 1, std::nullopt}});
        BlockPartition p;
        p.events = {dy("0"), dy("1"), dy("2")};
        p.xi = {{{0, dy("1")}}, {{1, dy("1")}}};
        CycleSpec spec{{1, 2}, {0, 1}, dy("1/2")};
        auto result = cyclic_shift(inst, p, spec);
        auto* err = std::get_if<TransformError>(&result);
        REQUIRE(err != nullptr);
        bool release = false;
        for (const auto& issue : err->report.issues) release |= issue.code == "release_violated";
        CHECK(release);
    }
}

TEST_CASE("swap_jobs") {
    SUBCASE("exchange of u and v, with v's inherited completion pinned") {
        Instance inst = independent_jobs(3);
        BlockPartition p;
        p.events = {dy("0"), dy("1/2"), dy("1"), dy("2")};
        p.xi = {{{0, dy("1/2")}, {1, dy("1/2")}},
                {{1, dy("1/2")}, {2, dy("1/2")}},
                {{0, dy("1/2")}, {2, dy("1/2")}}};
        Dyadic before = total_of(inst, p);
        auto result = swap_jobs(inst, p, 0, 1);
        auto* ok = std::get_if<BlockPartition>(&result);
        REQUIRE(ok != nullptr);
        // u takes v's old half unit in [1/2,1]; v takes over u's final piece,
        // whose completion gets its own event at 3/2
        REQUIRE(ok->events.size() == 5);
        CHECK(ok->events[3] == dy("3/2"));
        CHECK(ok->amount(1, 0) == dy("1/2"));
        CHECK(ok->amount(1, 2) == dy("1/2"));
        CHECK(ok->amount(1, 1) == dy("0"));
        CHECK(ok->amount(2, 1) == dy("1/2"));
        CHECK(ok->amount(3, 2) == dy("1/2"));
        IntervalSchedule r = realize(inst, *ok);
        CHECK(r.completion_time(0) == dy("1"));
        CHECK(r.completion_time(1) == dy("3/2"));
        CHECK(r.completion_time(2) == dy("2"));
        // s(u) = s(v): the non-strict case keeps the total unchanged
        CHECK(total_of(inst, *ok) == before);
    }
    SUBCASE("strict case improves the total") {
        // d completes late behind two jobs finishing together; swapping d with
        // one of them retimes d a half unit earlier
        Instance inst = independent_jobs(4);
        BlockPartition p;
        p.events = {dy("0"), dy("1"), dy("2"), dy("5/2")};
        p.xi = {{{0, dy("1/2")}, {3, dy("1")}},
                {{1, dy("1")}, {2, dy("1")}},
                {{0, dy("1/2")}}};
        Dyadic before = total_of(inst, p);
        auto result = swap_jobs(inst, p, 0, 1);
        auto* ok = std::get_if<BlockPartition>(&result);
        REQUIRE(ok != nullptr);
        Dyadic after = total_of(inst, *ok);
        CHECK(after < before);
        CHECK(before - after == dy("1/2"));
        CHECK(partition_feasible(inst, *ok).ok());
    }
    SUBCASE("dependent jobs in the final block are rejected") {
        Instance inst({{0, 0, std::nullopt}, {1, 0, 2}, {2, 0, std::nullopt}});
        BlockPartition p;
        p.events = {dy("0"), dy("1"), dy("2")};
        p.xi = {{{0, dy("1/2")}, {1, dy("1")}}, {{0, dy("1/2")}, {2, dy("1")}}};
        // a' = 1 precedes job 2 which is active in a's final block
        auto result = swap_jobs(inst, p, 0, 1);
        CHECK(std::holds_alternative<TransformError>(result));
    }
    SUBCASE("a' must complete exactly at the final block's start") {
        Instance inst = independent_jobs(3);
        BlockPartition p;
        p.events = {dy("0"), dy("1"), dy("2"), dy("3")};
        p.xi = {{{0, dy("1/2")}, {1, dy("1")}}, {{2, dy("1")}}, {{0, dy("1/2")}}};
        auto result = swap_jobs(inst, p, 0, 1);  // job 1 ends two blocks early
        CHECK(std::holds_alternative<TransformError>(result));
    }
}

TEST_CASE("epsilon_push") {
    SUBCASE("alpha-binding push normalizes the abnormal block") {
        // abnormal block 2 holds 1/32 + 3/32 of the two chain jobs next to a
        // spanning unit job; alpha = 1/32 is strictly the smallest bound
        Instance inst = independent_jobs(5);
        BlockPartition p;
        p.events = {dy("0"), dy("1/2"), dy("3/2"), dy("63/32"), dy("69/32"), dy("49/16")};
        p.xi = {{{0, dy("1/2")}, {1, dy("1/4")}},
                {{0, dy("1/32")}, {1, dy("3/32")}, {2, dy("1")}},
                {{0, dy("15/32")}, {1, dy("15/32")}},
                {{1, dy("3/16")}, {3, dy("3/32")}, {4, dy("3/32")}},
                {{3, dy("29/32")}, {4, dy("29/32")}}};
        REQUIRE(partition_feasible(inst, p).ok());
        auto chains = find_alternating_chains(inst, p);
        const AlternatingChain* chain = nullptr;
        for (const auto& c : chains)
            if (c.jobs.size() == 2) chain = &c;
        REQUIRE(chain != nullptr);
        CHECK(chain->jobs == std::vector<JobId>{0, 1});

        PushBounds bounds = push_bounds(inst, p, *chain, 3, 4);
        CHECK(bounds.alpha == dy("1/32"));
        CHECK(bounds.beta == dy("3/32"));
        CHECK_FALSE(bounds.gamma_bounded);
        CHECK(bounds.xy_cap == dy("3/32"));

        Dyadic before = total_of(inst, p);
        auto result = epsilon_push(inst, p, *chain, 3, 4);
        auto* ok = std::get_if<PushOutcome>(&result);
        REQUIRE(ok != nullptr);
        CHECK(ok->epsilon_used == dy("1/32"));
        CHECK(ok->binding == PushBound::Alpha);
        auto abnormal = abnormality_point(ok->partition);
        CHECK((!abnormal.has_value() || *abnormal > 2));
        CHECK(total_of(inst, ok->partition) == before);  // even-length chain
    }
    SUBCASE("odd chains strictly improve by epsilon") {
        bench::ChainCase cc = bench::make_chain_case(3, 42);
        // chains past length two bound epsilon by the release slack too
        PushBounds bounds = push_bounds(cc.instance, cc.partition, cc.chain, cc.x, cc.y);
        CHECK(bounds.gamma_bounded);
        auto tau_d2 = cc.partition.last_block(cc.chain.jobs[1]);
        REQUIRE(tau_d2.has_value());
        CHECK(bounds.gamma == cc.partition.events[static_cast<std::size_t>(*tau_d2)]);
        Dyadic before = total_of(cc.instance, cc.partition);
        auto result = epsilon_push(cc.instance, cc.partition, cc.chain, cc.x, cc.y);
        auto* ok = std::get_if<PushOutcome>(&result);
        REQUIRE(ok != nullptr);
        CHECK(total_of(cc.instance, ok->partition) == before - ok->epsilon_used);
    }
    SUBCASE("single-job chains are rejected") {
        bench::ChainCase cc = bench::make_chain_case(2, 7);
        AlternatingChain chain = cc.chain;
        chain.jobs.resize(1);
        CHECK(std::holds_alternative<TransformError>(epsilon_push(cc.instance, cc.partition, chain, cc.x, cc.y)));
    }
    SUBCASE("wrong third-block occupants are rejected") {
        bench::ChainCase cc = bench::make_chain_case(2, 9);
        CHECK(std::holds_alternative<TransformError>(
            epsilon_push(cc.instance, cc.partition, cc.chain, cc.x, cc.chain.jobs[0])));
    }
}

TEST_CASE("improve") {
    SUBCASE("a ccd pattern takes one strict swap") {
        Instance inst = independent_jobs(4);
        BlockPartition p;
        p.events = {dy("0"), dy("1"), dy("2"), dy("5/2")};
        p.xi = {{{0, dy("1/2")}, {3, dy("1")}},
                {{1, dy("1")}, {2, dy("1")}},
                {{0, dy("1/2")}}};
        Dyadic before = total_of(inst, p);
        ImproveResult result = improve(inst, p, 16);
        REQUIRE(result.applied.size() >= 1);
        CHECK(result.applied.front().kind == "ccd-swap");
        CHECK(total_of(inst, result.partition) < before);
    }
    SUBCASE("lint-clean partitions are left untouched") {
        Instance j0 = make_jp(0);
        BlockPartition p0;
        p0.events = {dy("0"), dy("3/2"), dy("5/2")};
        p0.xi = {{{0, dy("1")}, {1, dy("1")}, {2, dy("1")}}, {{3, dy("1")}}};
        BlockPartition derived = derive_partition(j0, realize(j0, p0));
        ImproveResult result = improve(j0, derived, 16);
        CHECK(result.applied.empty());
        CHECK(result.partition.events == derived.events);
    }
    SUBCASE("abnormal chains get pushed") {
        bench::ChainCase cc = bench::make_chain_case(2, 3);
        ImproveResult result = improve(cc.instance, cc.partition, 16);
        bool pushed = false;
        for (const auto& record : result.applied) pushed |= record.kind == "epsilon-push";
        CHECK(pushed);
        Dyadic before = total_of(cc.instance, cc.partition);
        CHECK(total_of(cc.instance, result.partition) <= before);
    }
    SUBCASE("totals never increase along the trace") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            Instance inst = random_intree(5, 1, seed * 53);
            BlockPartition p = derive_partition(inst, random_feasible_schedule(inst, 1, seed));
            ImproveResult result = improve(inst, p, 8);
            Dyadic prev = total_of(inst, p);
            for (const auto& record : result.applied) {
                CHECK(record.total_before == prev);
                CHECK(record.total_after <= record.total_before);
                prev = record.total_after;
            }
            CHECK(partition_feasible(inst, result.partition).ok());
        }
    }
}
