#ifndef NORMSCHED_SOLVER_HPP
#define NORMSCHED_SOLVER_HPP

#include <functional>
#include <optional>

#include "normsched/ratlp.hpp"
#include "normsched/schedule.hpp"

namespace normsched {

/// Combinatorial skeleton of a schedule: per-job start and completion block
/// (0-based) over `blocks` blocks. Every internal boundary is witnessed by a
/// start or a completion.
struct EventStructure {
    int blocks = 0;
    std::vector<int> start_block;
    std::vector<int> completion_block;
};

struct SolveStats {
    long structures_explored = 0;
    long lps_solved = 0;
    long pruned_by_bound = 0;   // incumbent lower-bound cuts
    long pruned_by_lemma = 0;   // enumeration branches cut by |active| <= 3
    long dp_states = 0;
};

enum class SolveStatus { Optimal, Infeasible, BudgetExceeded };

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    Dyadic optimal_value;
    BlockPartition partition;
    IntervalSchedule schedule;
    SolveStats stats;
    bool certified = false;
};

struct GridOptions {
    std::optional<Dyadic> horizon;       // defaults to max release + n
    long max_states = 20'000'000;        // expansion budget
};

/// Exact minimum total completion time over grid-aligned schedules: each
/// slot of width 2^-K runs at most two distinct available jobs for the full
/// slot. Memoized best-first search with an admissible chain bound.
SolveResult grid_dp_solve(const Instance& instance, unsigned grid_k, GridOptions options = {});

struct EnumOptions {
    int max_blocks = -1;                 // default 2n-1 (+1 with positive releases)
    bool prune_cardinality = true;       // |active| <= 3 per block
    long max_structures = -1;            // unlimited
};

struct EnumStats {
    long produced = 0;
    long cardinality_cuts = 0;
};

/// Streams all event structures in deterministic order; the callback returns
/// false to stop. Returns false when the budget cut enumeration short.
bool enumerate_structures(const Instance& instance, const EnumOptions& options,
                          const std::function<bool(const EventStructure&)>& yield, EnumStats* stats = nullptr);

/// LP over events e_2..e_q and active amounts xi_i(a); objective minimizes
/// the sum of completion events. `spanning` adds xi_tau(a) = block length.
LinearProgram structure_to_lp(const Instance& instance, const EventStructure& structure, bool spanning = true);

struct ExactOptions {
    EnumOptions enumeration;
    bool spanning_constraints = true;
    unsigned incumbent_grid_k = 2;
    int threads = 1;
};

/// Minimum over enumerated structures of their LP optima, pruned by a grid
/// incumbent. The returned partition is feasible and realizes the value.
SolveResult solve_exact(const Instance& instance, ExactOptions options = {});

} // namespace normsched

#endif
