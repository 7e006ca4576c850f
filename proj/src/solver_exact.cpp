#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "normsched/solver.hpp"

namespace normsched {

namespace {

struct EnumState {
    const Instance* instance;
    EnumOptions options;
    std::vector<JobId> topo;
    std::vector<int> start;
    std::vector<int> completion;
    std::vector<int> active_count;
    long produced = 0;
    long cardinality_cuts = 0;
    bool budget_hit = false;
    const std::function<bool(const EventStructure&)>* yield;
    bool stopped = false;
};

bool leaf_witnessed(const EnumState& st, int blocks) {
    // every boundary e_1..e_blocks must host a start or a completion
    std::vector<bool> witnessed(static_cast<std::size_t>(blocks) + 1, false);
    for (std::size_t a = 0; a < st.start.size(); ++a) {
        witnessed[static_cast<std::size_t>(st.start[a])] = true;
        witnessed[static_cast<std::size_t>(st.completion[a]) + 1] = true;
    }
    for (int k = 1; k <= blocks; ++k)
        if (!witnessed[static_cast<std::size_t>(k)]) return false;
    return true;
}

void enumerate_rec(EnumState& st, int blocks, std::size_t pos) {
    if (st.stopped) return;
    if (pos == st.topo.size()) {
        if (!leaf_witnessed(st, blocks)) return;
        if (st.options.max_structures >= 0 && st.produced >= st.options.max_structures) {
            st.budget_hit = true;
            st.stopped = true;
            return;
        }
        ++st.produced;
        EventStructure structure{blocks, st.start, st.completion};
        if (!(*st.yield)(structure)) st.stopped = true;
        return;
    }
    const JobId a = st.topo[pos];
    int smin = st.instance->release(a) > 0 ? 1 : 0;
    for (JobId p : st.instance->immediate_predecessors(a))
        smin = std::max(smin, st.completion[static_cast<std::size_t>(p)] + 1);
    for (int s = smin; s < blocks && !st.stopped; ++s) {
        for (int tau = s; tau < blocks && !st.stopped; ++tau) {
            bool fits = true;
            for (int i = s; i <= tau && fits; ++i)
                if (st.options.prune_cardinality && st.active_count[static_cast<std::size_t>(i)] >= 3) fits = false;
            if (!fits) {
                ++st.cardinality_cuts;
                continue;
            }
            st.start[static_cast<std::size_t>(a)] = s;
            st.completion[static_cast<std::size_t>(a)] = tau;
            for (int i = s; i <= tau; ++i) ++st.active_count[static_cast<std::size_t>(i)];
            enumerate_rec(st, blocks, pos + 1);
            for (int i = s; i <= tau; ++i) --st.active_count[static_cast<std::size_t>(i)];
        }
    }
}

} // namespace

bool enumerate_structures(const Instance& instance, const EnumOptions& options,
                          const std::function<bool(const EventStructure&)>& yield, EnumStats* stats) {
    const int n = instance.size();
    EnumState st;
    st.instance = &instance;
    st.options = options;
    if (st.options.max_blocks < 0) {
        // 2n-1 blocks suffice when every release is zero; a positive release
        // can add an unwitnessed leading gap block
        bool released_late = false;
        for (const Job& j : instance.jobs()) released_late |= j.release > 0;
        st.options.max_blocks = 2 * n - 1 + (released_late ? 1 : 0);
    }
    st.topo = instance.topological_order();
    st.start.assign(static_cast<std::size_t>(n), 0);
    st.completion.assign(static_cast<std::size_t>(n), 0);
    st.yield = &yield;
    for (int blocks = 1; blocks <= st.options.max_blocks && !st.stopped; ++blocks) {
        st.active_count.assign(static_cast<std::size_t>(blocks), 0);
        enumerate_rec(st, blocks, 0);
    }
    if (stats) {
        stats->produced = st.produced;
        stats->cardinality_cuts = st.cardinality_cuts;
    }
    return !st.budget_hit;
}

LinearProgram structure_to_lp(const Instance& instance, const EventStructure& structure, bool spanning) {
    const int n = instance.size();
    const int q = structure.blocks;  // events e_1..e_q beyond the fixed e_0 = 0
    LinearProgram lp;

    // event variables e_1..e_q; e_k is var k-1; e_0 = 0 is implicit
    for (int k = 1; k <= q; ++k) lp.add_variable(Rational(0));
    std::vector<std::vector<int>> xi_var(static_cast<std::size_t>(q), std::vector<int>(static_cast<std::size_t>(n), -1));
    for (int a = 0; a < n; ++a)
        for (int i = structure.start_block[static_cast<std::size_t>(a)];
             i <= structure.completion_block[static_cast<std::size_t>(a)]; ++i)
            xi_var[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = lp.add_variable(Rational(0));

    // objective: sum over jobs of the completion event e_{tau(a)+1}
    for (int a = 0; a < n; ++a)
        lp.objective[static_cast<std::size_t>(structure.completion_block[static_cast<std::size_t>(a)])] += 1;

    // events increase
    for (int k = 1; k < q; ++k)
        lp.add_row({{k, Rational(1)}, {k - 1, Rational(-1)}}, Relation::GreaterEqual, Rational(0));

    auto block_bounds = [&](int i) {
        // returns terms of e_{i+1} - e_i over variables (e_0 fixed at zero)
        std::vector<std::pair<int, Rational>> terms{{i, Rational(1)}};
        if (i > 0) terms.push_back({i - 1, Rational(-1)});
        return terms;
    };

    for (int i = 0; i < q; ++i) {
        std::vector<std::pair<int, Rational>> load;
        for (int a = 0; a < n; ++a) {
            const int v = xi_var[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
            if (v < 0) continue;
            // xi_i(a) <= e_{i+1} - e_i (equality when this is a's spanning block)
            auto terms = block_bounds(i);
            for (auto& [var, coeff] : terms) coeff = -coeff;
            terms.push_back({v, Rational(1)});
            const bool span_here = spanning && structure.completion_block[static_cast<std::size_t>(a)] == i;
            lp.add_row(terms, span_here ? Relation::Equal : Relation::LessEqual, Rational(0));
            load.push_back({v, Rational(1)});
        }
        if (load.empty()) continue;
        auto terms = block_bounds(i);
        for (auto& [var, coeff] : terms) load.push_back({var, coeff * Rational(-2)});
        lp.add_row(load, Relation::LessEqual, Rational(0));
    }

    for (int a = 0; a < n; ++a) {
        std::vector<std::pair<int, Rational>> total;
        for (int i = 0; i < q; ++i) {
            const int v = xi_var[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
            if (v >= 0) total.push_back({v, Rational(1)});
        }
        lp.add_row(total, Relation::Equal, Rational(1));
        const int s = structure.start_block[static_cast<std::size_t>(a)];
        const Rational release(instance.release(a));
        if (release != 0) {
            if (s == 0)
                lp.add_row({}, Relation::GreaterEqual, release);  // e_0 = 0 < r: infeasible
            else
                lp.add_row({{s - 1, Rational(1)}}, Relation::GreaterEqual, release);
        }
    }
    return lp;
}

namespace {

/// Cheap lower bound on the structure's objective: propagate release and
/// unit-work constraints through the event chain.
Rational structure_lower_bound(const Instance& instance, const EventStructure& structure) {
    const int q = structure.blocks;
    std::vector<Rational> lb(static_cast<std::size_t>(q) + 1, Rational(0));
    bool changed = true;
    int guard = q + instance.size() + 2;
    while (changed && guard-- > 0) {
        changed = false;
        for (int k = 1; k <= q; ++k)
            if (lb[static_cast<std::size_t>(k)] < lb[static_cast<std::size_t>(k) - 1]) {
                lb[static_cast<std::size_t>(k)] = lb[static_cast<std::size_t>(k) - 1];
                changed = true;
            }
        for (int a = 0; a < instance.size(); ++a) {
            const int s = structure.start_block[static_cast<std::size_t>(a)];
            const int t = structure.completion_block[static_cast<std::size_t>(a)] + 1;
            const Rational release(instance.release(a));
            if (lb[static_cast<std::size_t>(s)] < release) {
                lb[static_cast<std::size_t>(s)] = release;
                changed = true;
            }
            Rational done = lb[static_cast<std::size_t>(s)] + 1;
            if (lb[static_cast<std::size_t>(t)] < done) {
                lb[static_cast<std::size_t>(t)] = done;
                changed = true;
            }
        }
    }
    Rational total(0);
    for (int a = 0; a < instance.size(); ++a)
        total += lb[static_cast<std::size_t>(structure.completion_block[static_cast<std::size_t>(a)]) + 1];
    return total;
}

std::optional<BlockPartition> partition_from_lp(const Instance& instance, const EventStructure& structure,
                                                const LpSolution& solution) {
    const int q = structure.blocks;
    BlockPartition partition;
    partition.events.push_back(Dyadic::zero());
    for (int k = 1; k <= q; ++k) {
        auto e = to_dyadic(solution.assignment[static_cast<std::size_t>(k) - 1]);
        if (!e) return std::nullopt;
        partition.events.push_back(*e);
    }
    partition.xi.assign(static_cast<std::size_t>(q), {});
    int next_var = q;
    for (int a = 0; a < instance.size(); ++a)
        for (int i = structure.start_block[static_cast<std::size_t>(a)];
             i <= structure.completion_block[static_cast<std::size_t>(a)]; ++i) {
            auto amt = to_dyadic(solution.assignment[static_cast<std::size_t>(next_var++)]);
            if (!amt) return std::nullopt;
            if (!amt->is_zero()) partition.xi[static_cast<std::size_t>(i)][a] = *amt;
        }
    partition.canonicalize();
    ValidationReport feasible = partition_feasible(instance, partition);
    if (!feasible.ok()) return std::nullopt;
    return partition;
}

} // namespace

SolveResult solve_exact(const Instance& instance, ExactOptions options) {
    SolveResult incumbent = grid_dp_solve(instance, options.incumbent_grid_k, {});
    const bool have_incumbent = incumbent.status == SolveStatus::Optimal;

    struct Best {
        Rational value;
        long index = -1;
        EventStructure structure;
        LpSolution solution;
    };
    Best best;
    SolveStats stats;
    if (have_incumbent) stats.dp_states = incumbent.stats.dp_states;

    Rational incumbent_value = have_incumbent ? to_rational(incumbent.optimal_value) : Rational(0);

    std::vector<std::pair<long, EventStructure>> batch;
    std::mutex best_mutex;
    const int threads = std::max(1, options.threads);

    auto consider = [&](const EventStructure& structure, long index) {
        LinearProgram lp = structure_to_lp(instance, structure, options.spanning_constraints);
        LpSolution sol = solve_lp(lp);
        std::lock_guard<std::mutex> lock(best_mutex);
        ++stats.lps_solved;
        if (sol.status != LpStatus::Optimal) return;
        if (best.index < 0 || sol.value < best.value ||
            (sol.value == best.value && index < best.index)) {
            best.value = sol.value;
            best.index = index;
            best.structure = structure;
            best.solution = std::move(sol);
        }
    };

    long index = 0;
    EnumStats enum_stats;
    bool complete = enumerate_structures(instance, options.enumeration, [&](const EventStructure& structure) {
        ++stats.structures_explored;
        const long my_index = index++;
        Rational lb = structure_lower_bound(instance, structure);
        {
            std::lock_guard<std::mutex> lock(best_mutex);
            Rational cap = best.index >= 0 ? best.value : (have_incumbent ? incumbent_value : Rational(0));
            const bool have_cap = best.index >= 0 || have_incumbent;
            if (have_cap && lb > cap) {
                ++stats.pruned_by_bound;
                return true;
            }
        }
        if (threads == 1) {
            consider(structure, my_index);
        } else {
            batch.emplace_back(my_index, structure);
            if (batch.size() >= static_cast<std::size_t>(threads) * 8) {
                std::vector<std::thread> pool;
                std::atomic<std::size_t> cursor{0};
                for (int t = 0; t < threads; ++t)
                    pool.emplace_back([&] {
                        for (std::size_t i = cursor.fetch_add(1); i < batch.size(); i = cursor.fetch_add(1))
                            consider(batch[i].second, batch[i].first);
                    });
                for (auto& th : pool) th.join();
                batch.clear();
            }
        }
        return true;
    }, &enum_stats);
    stats.pruned_by_lemma = enum_stats.cardinality_cuts;
    if (!batch.empty()) {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> cursor{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = cursor.fetch_add(1); i < batch.size(); i = cursor.fetch_add(1))
                    consider(batch[i].second, batch[i].first);
            });
        for (auto& th : pool) th.join();
    }

    SolveResult result;
    result.stats = stats;

    if (best.index < 0) {
        if (have_incumbent && complete)
            throw std::logic_error("solve_exact: full enumeration found no structure despite a feasible schedule");
        result.status = have_incumbent ? SolveStatus::BudgetExceeded : SolveStatus::Infeasible;
        if (have_incumbent) {
            result.optimal_value = incumbent.optimal_value;
            result.partition = incumbent.partition;
            result.schedule = incumbent.schedule;
        }
        return result;
    }

    Rational final_value = best.value;
    bool certified = complete;
    if (have_incumbent && incumbent_value < final_value) {
        if (complete)
            throw std::logic_error("solve_exact: full enumeration missed the incumbent's value");
        // budgeted run missed the optimum's structure; keep the better bound
        final_value = incumbent_value;
        certified = false;
    }

    auto value_dyadic = to_dyadic(final_value);
    if (!value_dyadic)
        throw std::logic_error("solve_exact: optimal value is not dyadic: " + rational_str(final_value));

    std::optional<BlockPartition> partition;
    if (final_value == best.value) partition = partition_from_lp(instance, best.structure, best.solution);
    if (!partition && have_incumbent && incumbent.optimal_value == *value_dyadic) partition = incumbent.partition;
    if (!partition) {
        // dyadic witness exists on some grid of exponent <= 2n
        for (unsigned k = options.incumbent_grid_k + 1; k <= 2 * static_cast<unsigned>(instance.size()); ++k) {
            SolveResult refined = grid_dp_solve(instance, k, {});
            if (refined.status != SolveStatus::Optimal) continue;
            stats.dp_states += refined.stats.dp_states;
            if (refined.optimal_value == *value_dyadic) {
                partition = refined.partition;
                break;
            }
        }
    }
    if (!partition) throw std::logic_error("solve_exact: could not extract a dyadic optimal partition");

    result.status = SolveStatus::Optimal;
    result.certified = certified;
    result.optimal_value = *value_dyadic;
    result.partition = *partition;
    result.schedule = realize(instance, result.partition);
    result.stats = stats;
    if (certified &&
        schedule_metrics(result.schedule).total_completion_time != result.optimal_value)
        throw std::logic_error("solve_exact: partition does not realize the reported optimum");
    return result;
}

} // namespace normsched
