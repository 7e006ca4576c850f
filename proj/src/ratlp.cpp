#include "normsched/ratlp.hpp"

#include <stdexcept>

namespace normsched {

int LinearProgram::add_variable(Rational cost, std::optional<Rational> lo, std::optional<Rational> hi) {
    objective.push_back(std::move(cost));
    lower.push_back(std::move(lo));
    upper.push_back(std::move(hi));
    return num_vars++;
}

void LinearProgram::add_row(std::vector<std::pair<int, Rational>> terms, Relation relation, Rational rhs) {
    LpRow row;
    row.coefficients.assign(static_cast<std::size_t>(num_vars), Rational(0));
    for (auto& [var, coeff] : terms) row.coefficients.at(static_cast<std::size_t>(var)) += coeff;
    row.relation = relation;
    row.rhs = std::move(rhs);
    rows.push_back(std::move(row));
}

namespace {

/// Standard form: minimize c.x, A x = b, x >= 0, b >= 0. Original variables
/// map to one shifted column (finite lower bound) or a p-q pair (free).
struct StandardForm {
    std::vector<std::vector<Rational>> a;  // m x n
    std::vector<Rational> b;
    std::vector<Rational> c;               // structural + slack costs (no artificials)
    Rational constant;                     // objective offset from bound shifts
    int n = 0;                             // columns before artificials
    // per original variable: column of the shifted/positive part, and the
    // negative-part column for free variables (-1 if none)
    std::vector<int> pos_col;
    std::vector<int> neg_col;
    std::vector<Rational> shift;
    // per row: a column usable as the initial basic variable without an
    // artificial (slack, or surplus when rhs is zero); -1 otherwise
    std::vector<int> basic_col;
};

StandardForm build_standard_form(const LinearProgram& lp) {
    StandardForm sf;
    sf.constant = 0;
    sf.pos_col.assign(static_cast<std::size_t>(lp.num_vars), -1);
    sf.neg_col.assign(static_cast<std::size_t>(lp.num_vars), -1);
    sf.shift.assign(static_cast<std::size_t>(lp.num_vars), Rational(0));

    int cols = 0;
    for (int v = 0; v < lp.num_vars; ++v) {
        sf.pos_col[static_cast<std::size_t>(v)] = cols++;
        if (lp.lower[static_cast<std::size_t>(v)]) {
            sf.shift[static_cast<std::size_t>(v)] = *lp.lower[static_cast<std::size_t>(v)];
        } else {
            sf.neg_col[static_cast<std::size_t>(v)] = cols++;
        }
    }

    struct RawRow {
        std::vector<Rational> coeff;  // over structural columns
        Relation rel;
        Rational rhs;
    };
    std::vector<RawRow> raw;
    auto push_raw = [&](const std::vector<Rational>& orig, Relation rel, Rational rhs) {
        RawRow r;
        r.coeff.assign(static_cast<std::size_t>(cols), Rational(0));
        for (int v = 0; v < lp.num_vars; ++v) {
            const Rational& cv = orig[static_cast<std::size_t>(v)];
            if (cv == 0) continue;
            r.coeff[static_cast<std::size_t>(sf.pos_col[static_cast<std::size_t>(v)])] += cv;
            if (sf.neg_col[static_cast<std::size_t>(v)] >= 0)
                r.coeff[static_cast<std::size_t>(sf.neg_col[static_cast<std::size_t>(v)])] -= cv;
            rhs -= cv * sf.shift[static_cast<std::size_t>(v)];
        }
        r.rel = rel;
        r.rhs = std::move(rhs);
        raw.push_back(std::move(r));
    };

    for (const LpRow& row : lp.rows) push_raw(row.coefficients, row.relation, row.rhs);
    for (int v = 0; v < lp.num_vars; ++v) {
        if (!lp.upper[static_cast<std::size_t>(v)]) continue;
        std::vector<Rational> unit(static_cast<std::size_t>(lp.num_vars), Rational(0));
        unit[static_cast<std::size_t>(v)] = 1;
        push_raw(unit, Relation::LessEqual, *lp.upper[static_cast<std::size_t>(v)]);
    }

    for (RawRow& r : raw) {
        if (r.rhs < 0) {
            for (Rational& x : r.coeff) x = -x;
            r.rhs = -r.rhs;
            if (r.rel == Relation::LessEqual)
                r.rel = Relation::GreaterEqual;
            else if (r.rel == Relation::GreaterEqual)
                r.rel = Relation::LessEqual;
        }
    }

    const int m = static_cast<int>(raw.size());
    int slack_count = 0;
    for (const RawRow& r : raw)
        if (r.rel != Relation::Equal) ++slack_count;
    sf.n = cols + slack_count;

    sf.a.assign(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(sf.n), Rational(0)));
    sf.b.resize(static_cast<std::size_t>(m));
    sf.basic_col.assign(static_cast<std::size_t>(m), -1);
    int next_slack = cols;
    for (int i = 0; i < m; ++i) {
        for (int j2 = 0; j2 < cols; ++j2) sf.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j2)] = raw[static_cast<std::size_t>(i)].coeff[static_cast<std::size_t>(j2)];
        sf.b[static_cast<std::size_t>(i)] = raw[static_cast<std::size_t>(i)].rhs;
        if (raw[static_cast<std::size_t>(i)].rel == Relation::LessEqual) {
            sf.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(next_slack)] = 1;
            sf.basic_col[static_cast<std::size_t>(i)] = next_slack;
            ++next_slack;
        } else if (raw[static_cast<std::size_t>(i)].rel == Relation::GreaterEqual) {
            sf.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(next_slack)] = -1;
            if (raw[static_cast<std::size_t>(i)].rhs == 0) sf.basic_col[static_cast<std::size_t>(i)] = next_slack;
            ++next_slack;
        }
    }

    sf.c.assign(static_cast<std::size_t>(sf.n), Rational(0));
    for (int v = 0; v < lp.num_vars; ++v) {
        const Rational& cv = lp.objective[static_cast<std::size_t>(v)];
        sf.c[static_cast<std::size_t>(sf.pos_col[static_cast<std::size_t>(v)])] += cv;
        if (sf.neg_col[static_cast<std::size_t>(v)] >= 0)
            sf.c[static_cast<std::size_t>(sf.neg_col[static_cast<std::size_t>(v)])] -= cv;
        sf.constant += cv * sf.shift[static_cast<std::size_t>(v)];
    }
    return sf;
}

struct Tableau {
    std::vector<std::vector<Rational>> rows;  // m x (n+1), rhs last
    std::vector<Rational> z;                  // maintained reduced-cost row
    std::vector<int> basis;
    long pivots = 0;
};

void pivot(Tableau& t, int r, int col) {
    auto& prow = t.rows[static_cast<std::size_t>(r)];
    const Rational p = prow[static_cast<std::size_t>(col)];
    if (p != 1)
        for (Rational& x : prow)
            if (x != 0) x /= p;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (static_cast<int>(i) == r) continue;
        const Rational f = t.rows[i][static_cast<std::size_t>(col)];
        if (f == 0) continue;
        for (std::size_t j2 = 0; j2 < prow.size(); ++j2)
            if (prow[j2] != 0) t.rows[i][j2] -= f * prow[j2];
    }
    if (!t.z.empty()) {
        const Rational f = t.z[static_cast<std::size_t>(col)];
        if (f != 0)
            for (std::size_t j2 = 0; j2 < prow.size(); ++j2)
                if (prow[j2] != 0) t.z[j2] -= f * prow[j2];
    }
    t.basis[static_cast<std::size_t>(r)] = col;
    ++t.pivots;
}

void init_cost_row(Tableau& t, const std::vector<Rational>& c) {
    const std::size_t width = t.rows.empty() ? 0 : t.rows[0].size();
    t.z.assign(width, Rational(0));
    for (std::size_t j2 = 0; j2 + 1 < width; ++j2) t.z[j2] = c[j2];
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const Rational& cb = c[static_cast<std::size_t>(t.basis[i])];
        if (cb == 0) continue;
        for (std::size_t j2 = 0; j2 < width; ++j2) t.z[j2] -= cb * t.rows[i][j2];
    }
}

/// Runs Bland-rule simplex for min c.x over the current tableau.
/// Columns with blocked[j] true never enter. Returns false on unbounded.
bool simplex(Tableau& t, const std::vector<Rational>& c, const std::vector<bool>& blocked) {
    const int m = static_cast<int>(t.rows.size());
    const int width = m == 0 ? 0 : static_cast<int>(t.rows[0].size()) - 1;
    const long max_pivots = 2'000'000;
    init_cost_row(t, c);
    while (true) {
        if (t.pivots > max_pivots) throw std::runtime_error("simplex: pivot limit exceeded");
        int entering = -1;
        for (int j2 = 0; j2 < width && entering < 0; ++j2) {
            if (blocked[static_cast<std::size_t>(j2)]) continue;
            if (t.z[static_cast<std::size_t>(j2)] < 0) entering = j2;
        }
        if (entering < 0) return true;

        int leave = -1;
        Rational best_ratio;
        for (int i = 0; i < m; ++i) {
            const Rational& aij = t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(entering)];
            if (aij <= 0) continue;
            Rational ratio = t.rows[static_cast<std::size_t>(i)].back() / aij;
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio &&
                 t.basis[static_cast<std::size_t>(i)] < t.basis[static_cast<std::size_t>(leave)])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) return false;  // unbounded
        pivot(t, leave, entering);
    }
}

LpSolution extract(const LinearProgram& lp, const StandardForm& sf, const Tableau& t) {
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    std::vector<Rational> x(static_cast<std::size_t>(sf.n), Rational(0));
    for (std::size_t i = 0; i < t.basis.size(); ++i)
        if (t.basis[i] < sf.n) x[static_cast<std::size_t>(t.basis[i])] = t.rows[i].back();
    sol.assignment.resize(static_cast<std::size_t>(lp.num_vars));
    sol.value = sf.constant;
    for (int v = 0; v < lp.num_vars; ++v) {
        Rational value = sf.shift[static_cast<std::size_t>(v)] + x[static_cast<std::size_t>(sf.pos_col[static_cast<std::size_t>(v)])];
        if (sf.neg_col[static_cast<std::size_t>(v)] >= 0) value -= x[static_cast<std::size_t>(sf.neg_col[static_cast<std::size_t>(v)])];
        sol.assignment[static_cast<std::size_t>(v)] = value;
        sol.value += lp.objective[static_cast<std::size_t>(v)] * (value - sf.shift[static_cast<std::size_t>(v)]);
    }
    sol.basis = t.basis;
    sol.pivots = t.pivots;
    return sol;
}

} // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    StandardForm sf = build_standard_form(lp);
    const int m = static_cast<int>(sf.a.size());

    if (m == 0) {
        // no constraints: optimal at the lower corner unless any direction
        // of descent is unblocked
        LpSolution sol;
        for (const Rational& cost : sf.c)
            if (cost < 0) {
                sol.status = LpStatus::Unbounded;
                return sol;
            }
        sol.status = LpStatus::Optimal;
        sol.assignment.resize(static_cast<std::size_t>(lp.num_vars));
        sol.value = sf.constant;
        for (int v = 0; v < lp.num_vars; ++v) sol.assignment[static_cast<std::size_t>(v)] = sf.shift[static_cast<std::size_t>(v)];
        return sol;
    }

    // phase 1 tableau; artificials only where no slack/surplus can be basic
    int artificials = 0;
    for (int i = 0; i < m; ++i)
        if (sf.basic_col[static_cast<std::size_t>(i)] < 0) ++artificials;
    Tableau t;
    t.basis.resize(static_cast<std::size_t>(m));
    t.rows.assign(static_cast<std::size_t>(m),
                  std::vector<Rational>(static_cast<std::size_t>(sf.n + artificials) + 1, Rational(0)));
    int next_artificial = sf.n;
    for (int i = 0; i < m; ++i) {
        for (int j2 = 0; j2 < sf.n; ++j2) t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j2)] = sf.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j2)];
        t.rows[static_cast<std::size_t>(i)].back() = sf.b[static_cast<std::size_t>(i)];
        if (sf.basic_col[static_cast<std::size_t>(i)] >= 0) {
            t.basis[static_cast<std::size_t>(i)] = sf.basic_col[static_cast<std::size_t>(i)];
            // surplus columns enter with -1; flip the row so the basic value is +rhs (= 0)
            if (sf.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(sf.basic_col[static_cast<std::size_t>(i)])] < 0)
                for (Rational& x : t.rows[static_cast<std::size_t>(i)]) x = -x;
        } else {
            t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(next_artificial)] = 1;
            t.basis[static_cast<std::size_t>(i)] = next_artificial;
            ++next_artificial;
        }
    }

    std::vector<Rational> phase1_cost(static_cast<std::size_t>(sf.n + artificials), Rational(0));
    for (int j2 = sf.n; j2 < sf.n + artificials; ++j2) phase1_cost[static_cast<std::size_t>(j2)] = 1;
    std::vector<bool> blocked(static_cast<std::size_t>(sf.n + artificials), false);
    if (!simplex(t, phase1_cost, blocked)) throw std::logic_error("solve_lp: phase 1 unbounded");

    Rational phase1_value = 0;
    for (int i = 0; i < m; ++i)
        if (t.basis[static_cast<std::size_t>(i)] >= sf.n) phase1_value += t.rows[static_cast<std::size_t>(i)].back();
    if (phase1_value != 0) {
        LpSolution sol;
        sol.status = LpStatus::Infeasible;
        sol.pivots = t.pivots;
        return sol;
    }

    // drive remaining artificials out, dropping redundant rows
    for (int i = static_cast<int>(t.rows.size()) - 1; i >= 0; --i) {
        if (t.basis[static_cast<std::size_t>(i)] < sf.n) continue;
        int col = -1;
        for (int j2 = 0; j2 < sf.n && col < 0; ++j2)
            if (t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j2)] != 0) col = j2;
        if (col >= 0) {
            pivot(t, i, col);
        } else {
            t.rows.erase(t.rows.begin() + i);
            t.basis.erase(t.basis.begin() + i);
        }
    }
    // strip artificial columns
    for (auto& row : t.rows) row.erase(row.begin() + sf.n, row.end() - 1);

    std::vector<bool> none(static_cast<std::size_t>(sf.n), false);
    if (!simplex(t, sf.c, none)) {
        LpSolution sol;
        sol.status = LpStatus::Unbounded;
        sol.pivots = t.pivots;
        return sol;
    }
    return extract(lp, sf, t);
}

LpSolution solve_lp_with_basis(const LinearProgram& lp, const std::vector<int>& basis) {
    StandardForm sf = build_standard_form(lp);
    const int m = static_cast<int>(sf.a.size());
    if (static_cast<int>(basis.size()) > m) return solve_lp(lp);
    for (int col : basis)
        if (col < 0 || col >= sf.n) return solve_lp(lp);

    Tableau t;
    t.rows.assign(static_cast<std::size_t>(basis.size()),
                  std::vector<Rational>(static_cast<std::size_t>(sf.n) + 1, Rational(0)));
    // warm start only supports square systems (no redundant rows dropped)
    if (static_cast<int>(basis.size()) != m) return solve_lp(lp);
    for (int i = 0; i < m; ++i) {
        for (int j2 = 0; j2 < sf.n; ++j2) t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j2)] = sf.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j2)];
        t.rows[static_cast<std::size_t>(i)].back() = sf.b[static_cast<std::size_t>(i)];
    }
    t.basis.assign(static_cast<std::size_t>(m), -1);
    // Gauss-Jordan: make each basis column a distinct unit vector
    std::vector<bool> row_used(static_cast<std::size_t>(m), false);
    for (int col : basis) {
        int r = -1;
        for (int i = 0; i < m && r < 0; ++i)
            if (!row_used[static_cast<std::size_t>(i)] && t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) r = i;
        if (r < 0) return solve_lp(lp);  // singular basis
        pivot(t, r, col);
        row_used[static_cast<std::size_t>(r)] = true;
    }
    for (int i = 0; i < m; ++i)
        if (t.rows[static_cast<std::size_t>(i)].back() < 0) return solve_lp(lp);  // not primal feasible

    std::vector<bool> none(static_cast<std::size_t>(sf.n), false);
    if (!simplex(t, sf.c, none)) {
        LpSolution sol;
        sol.status = LpStatus::Unbounded;
        sol.pivots = t.pivots;
        return sol;
    }
    return extract(lp, sf, t);
}

} // namespace normsched
