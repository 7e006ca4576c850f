#ifndef NORMSCHED_SCHEDULE_HPP
#define NORMSCHED_SCHEDULE_HPP

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "normsched/partition.hpp"

namespace normsched {

struct Piece {
    JobId job;
    Dyadic start;
    Dyadic end;
    Dyadic length() const { return end - start; }
};

/// A realized two-machine schedule: per-machine ordered, non-overlapping
/// pieces. Adjacent same-job pieces on one machine are kept merged.
struct IntervalSchedule {
    std::array<std::vector<Piece>, 2> machines;

    bool empty() const { return machines[0].empty() && machines[1].empty(); }
    std::vector<Piece> pieces_of(JobId job) const;
    /// Maximal intervals during which `job` executes (cross-machine abutting
    /// pieces merge into one run).
    std::vector<std::pair<Dyadic, Dyadic>> runs_of(JobId job) const;
    Dyadic start_time(JobId job) const;
    Dyadic completion_time(JobId job) const;
    Dyadic total_of(JobId job) const;
    /// Work of `job` executed at or after `from`.
    Dyadic work_from(JobId job, const Dyadic& from) const;
    std::vector<JobId> jobs() const;
};

struct ScheduleMetrics {
    std::map<JobId, Dyadic> completions;
    Dyadic total_completion_time;
    Dyadic makespan;
};

class FeasibilityError : public std::runtime_error {
public:
    FeasibilityError(std::string what, ValidationReport report)
        : std::runtime_error(std::move(what)), report(std::move(report)) {}
    ValidationReport report;
};

/// McNaughton wrap-around fill of one block: jobs in ascending id, machine 1
/// first, overflow wraps to machine 2 from the block start. At most one job
/// splits, and its pieces never overlap in time. Throws on capacity misuse.
std::array<std::vector<Piece>, 2> mcnaughton_block(const std::map<JobId, Dyadic>& amounts,
                                                   const Dyadic& block_start, const Dyadic& block_end);

/// Canonical realization: McNaughton applied block by block.
IntervalSchedule realize(const Instance& instance, const BlockPartition& partition);

/// Events are {0} plus all job starts and completions; xi buckets each job's
/// executed length per block.
BlockPartition derive_partition(const Instance& instance, const IntervalSchedule& schedule);

ScheduleMetrics schedule_metrics(const IntervalSchedule& schedule);

/// Structural checks plus (with the instance) unit totals, releases and
/// precedence between pieces.
ValidationReport validate_schedule(const Instance& instance, const IntervalSchedule& schedule);

} // namespace normsched

#endif
