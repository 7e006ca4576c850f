#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "normsched/ratlp.hpp"

using namespace normsched;

TEST_CASE("one-variable bound") {
    LinearProgram lp;
    int x = lp.add_variable(Rational(1));
    lp.add_row({{x, Rational(1)}}, Relation::GreaterEqual, Rational(3));
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == Rational(3));
    CHECK(sol.assignment[0] == Rational(3));
}

TEST_CASE("two variables share one unit") {
    LinearProgram lp;
    int x = lp.add_variable(Rational(1));
    int y = lp.add_variable(Rational(1));
    lp.add_row({{x, Rational(1)}, {y, Rational(1)}}, Relation::GreaterEqual, Rational(1));
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == Rational(1));
}

TEST_CASE("unbounded and infeasible statuses") {
    LinearProgram down;
    down.add_variable(Rational(-1));
    CHECK(solve_lp(down).status == LpStatus::Unbounded);

    LinearProgram empty;
    int x = empty.add_variable(Rational(1));
    empty.add_row({{x, Rational(1)}}, Relation::GreaterEqual, Rational(3));
    empty.add_row({{x, Rational(1)}}, Relation::LessEqual, Rational(1));
    CHECK(solve_lp(empty).status == LpStatus::Infeasible);
}

TEST_CASE("free variables and equality rows") {
    LinearProgram lp;
    int x = lp.add_variable(Rational(1), std::nullopt);  // free
    lp.add_row({{x, Rational(1)}}, Relation::GreaterEqual, Rational(-3));
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == Rational(-3));

    LinearProgram eq;
    int a = eq.add_variable(Rational(2));
    int b = eq.add_variable(Rational(3));
    eq.add_row({{a, Rational(1)}, {b, Rational(1)}}, Relation::Equal, Rational(5));
    eq.add_row({{a, Rational(1)}, {b, Rational(-1)}}, Relation::Equal, Rational(1));
    sol = solve_lp(eq);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.assignment[0] == Rational(3));
    CHECK(sol.assignment[1] == Rational(2));
    CHECK(sol.value == Rational(12));
}

TEST_CASE("upper bounds via the bound vector") {
    LinearProgram lp;
    lp.add_variable(Rational(-1), Rational(0), Rational(7, 2));
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.assignment[0] == Rational(7, 2));
    CHECK(sol.value == Rational(-7, 2));
}

TEST_CASE("Bland's rule terminates the classic cycling example") {
    // Beale's degenerate LP cycles under Dantzig pricing
    LinearProgram lp;
    int x1 = lp.add_variable(Rational(-3, 4));
    int x2 = lp.add_variable(Rational(150));
    int x3 = lp.add_variable(Rational(-1, 50));
    int x4 = lp.add_variable(Rational(6));
    lp.add_row({{x1, Rational(1, 4)}, {x2, Rational(-60)}, {x3, Rational(-1, 25)}, {x4, Rational(9)}},
               Relation::LessEqual, Rational(0));
    lp.add_row({{x1, Rational(1, 2)}, {x2, Rational(-90)}, {x3, Rational(-1, 50)}, {x4, Rational(3)}},
               Relation::LessEqual, Rational(0));
    lp.add_row({{x3, Rational(1)}}, Relation::LessEqual, Rational(1));
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == Rational(-1, 20));
    CHECK(sol.pivots < 100);
}

TEST_CASE("optimal solutions verify against their constraints") {
    std::mt19937_64 rng(2024);
    int solved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        LinearProgram lp;
        const int n = 2 + static_cast<int>(rng() % 3);
        for (int v = 0; v < n; ++v)
            lp.add_variable(Rational(static_cast<long>(rng() % 11) - 5), Rational(0), Rational(4));
        const int m = 1 + static_cast<int>(rng() % 3);
        for (int r = 0; r < m; ++r) {
            std::vector<std::pair<int, Rational>> terms;
            for (int v = 0; v < n; ++v) terms.push_back({v, Rational(static_cast<long>(rng() % 7) - 3)});
            Relation rel = static_cast<Relation>(rng() % 3);
            lp.add_row(terms, rel, Rational(static_cast<long>(rng() % 9) - 2));
        }
        LpSolution sol = solve_lp(lp);
        if (sol.status != LpStatus::Optimal) continue;
        ++solved;
        Rational objective(0);
        for (int v = 0; v < n; ++v) {
            CHECK(sol.assignment[static_cast<std::size_t>(v)] >= 0);
            CHECK(sol.assignment[static_cast<std::size_t>(v)] <= 4);
            objective += lp.objective[static_cast<std::size_t>(v)] * sol.assignment[static_cast<std::size_t>(v)];
        }
        CHECK(objective == sol.value);
        for (const LpRow& row : lp.rows) {
            Rational lhs(0);
            for (int v = 0; v < n; ++v)
                lhs += row.coefficients[static_cast<std::size_t>(v)] * sol.assignment[static_cast<std::size_t>(v)];
            if (row.relation == Relation::LessEqual) CHECK(lhs <= row.rhs);
            if (row.relation == Relation::GreaterEqual) CHECK(lhs >= row.rhs);
            if (row.relation == Relation::Equal) CHECK(lhs == row.rhs);
        }
    }
    CHECK(solved > 20);
}

TEST_CASE("warm start from the optimal basis reproduces the value") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        LinearProgram lp;
        const int n = 2 + static_cast<int>(rng() % 3);
        for (int v = 0; v < n; ++v)
            lp.add_variable(Rational(static_cast<long>(rng() % 9) - 4), Rational(0), Rational(3));
        for (int r = 0; r < 2; ++r) {
            std::vector<std::pair<int, Rational>> terms;
            for (int v = 0; v < n; ++v) terms.push_back({v, Rational(static_cast<long>(rng() % 5) - 2)});
            lp.add_row(terms, Relation::LessEqual, Rational(static_cast<long>(rng() % 6)));
        }
        LpSolution first = solve_lp(lp);
        if (first.status != LpStatus::Optimal) continue;
        LpSolution warm = solve_lp_with_basis(lp, first.basis);
        REQUIRE(warm.status == LpStatus::Optimal);
        CHECK(warm.value == first.value);
    }
}
