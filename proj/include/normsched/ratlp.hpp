#ifndef NORMSCHED_RATLP_HPP
#define NORMSCHED_RATLP_HPP

#include <optional>
#include <vector>

#include "normsched/rational.hpp"

namespace normsched {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpRow {
    std::vector<Rational> coefficients;
    Relation relation;
    Rational rhs;
};

struct LinearProgram {
    int num_vars = 0;
    std::vector<Rational> objective;  // minimize objective . v
    std::vector<LpRow> rows;
    std::vector<std::optional<Rational>> lower;  // per-variable, unset = free below
    std::vector<std::optional<Rational>> upper;

    int add_variable(Rational cost, std::optional<Rational> lo = Rational(0),
                     std::optional<Rational> hi = std::nullopt);
    void add_row(std::vector<std::pair<int, Rational>> terms, Relation relation, Rational rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational value;
    std::vector<Rational> assignment;
    std::vector<int> basis;  // standard-form variable indices
    long pivots = 0;
};

/// Exact two-phase primal simplex with Bland's rule (lowest index in, lowest
/// basic index out on ratio ties); termination guaranteed, no cycling.
LpSolution solve_lp(const LinearProgram& lp);

/// Re-solves starting from a previously reported basis; falls back to a
/// fresh solve when the basis is unusable.
LpSolution solve_lp_with_basis(const LinearProgram& lp, const std::vector<int>& basis);

} // namespace normsched

#endif
