#ifndef NORMSCHED_PARTITION_HPP
#define NORMSCHED_PARTITION_HPP

#include <map>
#include <optional>
#include <vector>

#include "normsched/dyadic.hpp"
#include "normsched/instance.hpp"

namespace normsched {

/// Events e_1..e_q with e_1 = 0 plus the per-block executed amounts xi_i(a)
/// for blocks i = 1..q-1 (stored 0-based). Together they pin a schedule up
/// to within-block piece placement.
struct BlockPartition {
    std::vector<Dyadic> events;
    std::vector<std::map<JobId, Dyadic>> xi;

    int block_count() const { return static_cast<int>(xi.size()); }
    Dyadic block_length(int block) const {
        return events.at(static_cast<std::size_t>(block) + 1) - events.at(static_cast<std::size_t>(block));
    }
    Dyadic amount(int block, JobId job) const {
        const auto& m = xi.at(static_cast<std::size_t>(block));
        auto it = m.find(job);
        return it == m.end() ? Dyadic::zero() : it->second;
    }
    Dyadic block_total(int block) const {
        Dyadic total;
        for (const auto& [job, amt] : xi.at(static_cast<std::size_t>(block))) total += amt;
        return total;
    }
    Dyadic job_total(JobId job) const {
        Dyadic total;
        for (const auto& m : xi) {
            auto it = m.find(job);
            if (it != m.end()) total += it->second;
        }
        return total;
    }

    /// Last block with a positive amount of `job`, if any.
    std::optional<int> last_block(JobId job) const;
    /// First block with a positive amount of `job`, if any.
    std::optional<int> first_block(JobId job) const;

    /// Drops zero entries and zero-length blocks (merging equal events).
    void canonicalize();
};

/// Checks the feasibility conditions: amounts fit their blocks, block loads
/// fit two machines, every job totals one unit, releases and precedence are
/// respected across blocks. Violations are data, not faults.
ValidationReport partition_feasible(const Instance& instance, const BlockPartition& partition);

} // namespace normsched

#endif
