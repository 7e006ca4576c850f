#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "normsched/analysis.hpp"
#include "normsched/instances.hpp"

using namespace normsched;

namespace {
Dyadic dy(const char* s) { return Dyadic::parse(s); }
}

TEST_CASE("make_jp layout") {
    Instance j0 = make_jp(0);
    REQUIRE(j0.size() == 4);
    CHECK(j0.release(0) == 0);
    CHECK(j0.release(3) == 1);
    CHECK(*j0.parent(0) == 3);
    CHECK(*j0.parent(2) == 3);
    CHECK_FALSE(j0.parent(3).has_value());

    Instance j1 = make_jp(1);
    REQUIRE(j1.size() == 8);
    CHECK(*j1.parent(3) == 7);
    CHECK(j1.release(7) == 3);
    CHECK(j1.precedes(0, 7));
    CHECK(j1.independent(0, 4));

    CHECK(make_jp(3).size() == 16);
    for (int p = 0; p <= 4; ++p) CHECK(validate_instance(make_jp(p)).ok());
}

TEST_CASE("make_pp_schedule matches the explicit construction") {
    SUBCASE("p = 0") {
        IntervalSchedule s = make_pp_schedule(0);
        CHECK(validate_schedule(make_jp(0), s).ok());
        ScheduleMetrics m = schedule_metrics(s);
        CHECK(m.completions.at(3) == dy("5/2"));
        CHECK(m.total_completion_time == dy("13/2"));
    }
    SUBCASE("p = 1") {
        IntervalSchedule s = make_pp_schedule(1);
        CHECK(validate_schedule(make_jp(1), s).ok());
        ScheduleMetrics m = schedule_metrics(s);
        CHECK(m.completions.at(7) == dy("19/4"));
        CHECK(m.total_completion_time == dy("87/4"));
        CHECK(count_preemptions(s, 5) == 1);  // a_2^1
        auto pieces = s.pieces_of(5);         // split at [5/2,11/4] and [3,15/4]
        REQUIRE(pieces.size() == 2);
        CHECK(pieces[0].start == dy("5/2"));
        CHECK(pieces[0].end == dy("11/4"));
        CHECK(pieces[1].start == dy("3"));
        CHECK(pieces[1].end == dy("15/4"));
    }
    SUBCASE("p = 2 completes a_4^2 at 55/8") {
        IntervalSchedule s = make_pp_schedule(2);
        CHECK(validate_schedule(make_jp(2), s).ok());
        CHECK(s.completion_time(11) == dy("55/8"));
    }
    SUBCASE("normal for p <= 6, with the consistency identity") {
        for (int p = 0; p <= 6; ++p) {
            Instance jp = make_jp(p);
            IntervalSchedule s = make_pp_schedule(p);
            REQUIRE(validate_schedule(jp, s).ok());
            CHECK_FALSE(abnormality_point(derive_partition(jp, s)).has_value());
            Dyadic expected = Dyadic(2 * p + 3) - Dyadic(BigInt(1), static_cast<unsigned>(p) + 1);
            CHECK(s.completion_time(4 * p + 3) == expected);
            if (p >= 1) {
                Dyadic prev = Dyadic(2 * p + 1) - Dyadic(BigInt(1), static_cast<unsigned>(p));
                CHECK(s.completion_time(4 * (p - 1) + 3) == prev);
            }
        }
    }
}

TEST_CASE("make_theorem_instance") {
    CHECK(theorem_default_chain_length(0) == 5120);
    CHECK(theorem_default_chain_length(2) < 0);  // above the cap

    Instance t0 = make_theorem_instance(0);
    CHECK(t0.size() == 4 + 1 + 5120);
    CHECK(validate_instance(t0).ok());
    CHECK(*t0.parent(3) == 5);   // a_4^0 precedes b_1
    CHECK(*t0.parent(4) == 5);   // the pivot precedes b_1
    CHECK(t0.release(4) == 0);

    Instance t_small = make_theorem_instance(0, 4);
    CHECK(t_small.size() == 9);

    CHECK_THROWS(make_theorem_instance(2));
}

TEST_CASE("theorem companion schedule") {
    SUBCASE("p = 0, full chain") {
        Instance t0 = make_theorem_instance(0);
        IntervalSchedule s = make_theorem_companion_schedule(0);
        CHECK(validate_schedule(t0, s).ok());
        CHECK(count_preemptions(s, 4) == 0);
        CHECK(s.completion_time(4) == dy("5/2"));
    }
    SUBCASE("pivot preempted p times for small chains") {
        for (int p = 1; p <= 2; ++p) {
            Instance tp = make_theorem_instance(p, 8);
            IntervalSchedule s = make_theorem_companion_schedule(p, 8);
            REQUIRE(validate_schedule(tp, s).ok());
            const JobId pivot = 4 * (p + 1);
            CHECK(count_preemptions(s, pivot) >= p);
            Dyadic expected = Dyadic(2 * (p + 1)) + Dyadic(BigInt(1), static_cast<unsigned>(p) + 1);
            CHECK(s.completion_time(pivot) == expected);
        }
    }
}

TEST_CASE("random_intree determinism and shape") {
    Instance one = random_intree(1, 0, 7);
    CHECK(one.size() == 1);
    CHECK_FALSE(one.parent(0).has_value());

    Instance a = random_intree(5, 2, 42);
    Instance b = random_intree(5, 2, 42);
    REQUIRE(a.size() == b.size());
    for (int i = 0; i < a.size(); ++i) {
        CHECK(a.release(i) == b.release(i));
        CHECK(a.parent(i) == b.parent(i));
    }
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Instance inst = random_intree(1 + static_cast<int>(seed % 6), 2, seed);
        CHECK(validate_instance(inst).ok());
    }
}

TEST_CASE("random_feasible_schedule") {
    SUBCASE("single job runs at its release") {
        Instance late({{0, 2, std::nullopt}});
        IntervalSchedule s = random_feasible_schedule(late, 0, 1);
        REQUIRE(s.machines[0].size() + s.machines[1].size() == 1);
        CHECK(s.start_time(0) == dy("2"));
        CHECK(s.completion_time(0) == dy("3"));
    }
    SUBCASE("J_0 draws satisfy the tail-work bound") {
        Instance j0 = make_jp(0);
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            IntervalSchedule s = random_feasible_schedule(j0, 1, seed);
            CHECK(validate_schedule(j0, s).ok());
            CHECK(s.work_from(3, dy("2")) >= dy("1/2"));
        }
    }
    SUBCASE("different seeds usually differ on J_1") {
        Instance j1 = make_jp(1);
        IntervalSchedule s1 = random_feasible_schedule(j1, 2, 1);
        IntervalSchedule s2 = random_feasible_schedule(j1, 2, 2);
        CHECK(validate_schedule(j1, s1).ok());
        CHECK(validate_schedule(j1, s2).ok());
        CHECK(schedule_metrics(s1).total_completion_time != schedule_metrics(s2).total_completion_time);
    }
}
