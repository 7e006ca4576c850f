#ifndef NORMSCHED_INSTANCE_HPP
#define NORMSCHED_INSTANCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace normsched {

using JobId = int;

/// Unit-time job. `parent` is the job's unique successor in the in-tree:
/// this job must complete before the parent starts.
struct Job {
    JobId id = 0;
    std::int64_t release = 0;
    std::optional<JobId> parent;
};

struct ValidationIssue {
    std::string code;
    std::string message;
    std::optional<JobId> job;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

/// A set of unit jobs with integer release dates and in-tree precedence.
class Instance {
public:
    Instance() = default;
    explicit Instance(std::vector<Job> jobs) : jobs_(std::move(jobs)) {}

    const std::vector<Job>& jobs() const { return jobs_; }
    int size() const { return static_cast<int>(jobs_.size()); }
    const Job& job(JobId id) const { return jobs_.at(static_cast<std::size_t>(id)); }
    std::int64_t release(JobId id) const { return job(id).release; }
    std::optional<JobId> parent(JobId id) const { return job(id).parent; }

    /// a ≺ b: b is reachable from a along parent links.
    bool precedes(JobId a, JobId b) const;
    bool independent(JobId a, JobId b) const { return !precedes(a, b) && !precedes(b, a); }

    /// Immediate predecessors of b (jobs whose parent is b).
    std::vector<JobId> immediate_predecessors(JobId b) const;

    /// Jobs ordered so every job appears before its parent. Requires validity.
    std::vector<JobId> topological_order() const;

private:
    std::vector<Job> jobs_;
};

/// Accepts iff ids are dense 0..n-1, releases are nonnegative integers and
/// parent links form a forest of in-trees.
ValidationReport validate_instance(const Instance& instance);

} // namespace normsched

#endif
