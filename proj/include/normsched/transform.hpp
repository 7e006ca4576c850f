#ifndef NORMSCHED_TRANSFORM_HPP
#define NORMSCHED_TRANSFORM_HPP

#include <string>
#include <variant>
#include <vector>

#include "normsched/analysis.hpp"

namespace normsched {

/// Cycle (i_1 ->a_1 i_2 ->a_2 ... ->a_j i_1): in each block i_{k+1}, epsilon
/// of a_{k+1} is replaced by epsilon of a_k.
struct CycleSpec {
    std::vector<int> blocks;  // 1-based block indices i_1..i_j
    std::vector<JobId> jobs;  // a_1..a_j, pairwise distinct
    Dyadic epsilon;
};

struct TransformError {
    std::string message;
    ValidationReport report;  // populated when the raw move broke feasibility
};

using TransformResult = std::variant<BlockPartition, TransformError>;

TransformResult cyclic_shift(const Instance& instance, const BlockPartition& partition, const CycleSpec& spec);

/// Swapping a and a' (SPT exchange at a's final block). Preconditions: a'
/// completes exactly at e_{tau(a)}, starts no later than a in the canonical
/// realization, and is independent of every job in a's final block.
TransformResult swap_jobs(const Instance& instance, const BlockPartition& partition, JobId a, JobId a_prime);

enum class PushBound { Alpha, Beta, Gamma, XYCap };
std::string to_string(PushBound bound);

struct PushBounds {
    Dyadic alpha;   // xi_i(d_u)
    Dyadic beta;    // half the minimum advanced-job final-block length
    Dyadic gamma;   // minimum release slack over U \ {1,2}; absent bound = unset
    bool gamma_bounded = false;
    Dyadic xy_cap;  // min(xi(x), xi(y)) in d_l's final block
    Dyadic epsilon() const;
    PushBound binding() const;
};

struct PushOutcome {
    BlockPartition partition;
    Dyadic epsilon_used;
    PushBound binding;
};

using PushResult = std::variant<PushOutcome, TransformError>;

PushBounds push_bounds(const Instance& instance, const BlockPartition& partition, const AlternatingChain& chain,
                       JobId x, JobId y);

/// Epsilon-pushing of d_l along an alternating chain: the two abnormal jobs
/// trade epsilon in block i, advanced-parity chain jobs complete epsilon
/// earlier, the others epsilon later, x and y repack around d_l's completion.
PushResult epsilon_push(const Instance& instance, const BlockPartition& partition, const AlternatingChain& chain,
                        JobId x, JobId y);

struct TransformationRecord {
    std::string kind;
    std::string detail;
    Dyadic total_before;
    Dyadic total_after;
};

struct ImproveResult {
    BlockPartition partition;
    std::vector<TransformationRecord> applied;
};

/// Fixpoint engine: ccd-swap, then interlace-driven cyclic shift, then push,
/// while lint keeps finding a constructively fixable violation. Total
/// completion time never increases.
ImproveResult improve(const Instance& instance, const BlockPartition& partition, int max_rounds);

std::string trace_to_json(const std::vector<TransformationRecord>& trace);

} // namespace normsched

#endif
