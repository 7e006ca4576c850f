#include "normsched/instance.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace normsched {

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i) os << "; ";
        os << issues[i].code << ": " << issues[i].message;
    }
    return os.str();
}

bool Instance::precedes(JobId a, JobId b) const {
    if (a == b) return false;
    std::optional<JobId> cur = parent(a);
    int guard = size() + 1;
    while (cur && guard-- > 0) {
        if (*cur == b) return true;
        cur = parent(*cur);
    }
    return false;
}

std::vector<JobId> Instance::immediate_predecessors(JobId b) const {
    std::vector<JobId> preds;
    for (const Job& j : jobs_)
        if (j.parent && *j.parent == b) preds.push_back(j.id);
    return preds;
}

std::vector<JobId> Instance::topological_order() const {
    std::vector<int> depth(jobs_.size(), -1);
    // depth = distance to the root of the job's in-tree
    for (const Job& j : jobs_) {
        int d = 0;
        std::optional<JobId> cur = j.parent;
        int guard = size() + 1;
        while (cur && guard-- > 0) {
            ++d;
            cur = parent(*cur);
        }
        if (guard < 0) throw std::logic_error("topological_order: cycle in parent links");
        depth[static_cast<std::size_t>(j.id)] = d;
    }
    std::vector<JobId> order(jobs_.size());
    for (std::size_t i = 0; i < jobs_.size(); ++i) order[i] = static_cast<JobId>(i);
    std::stable_sort(order.begin(), order.end(), [&](JobId a, JobId b) {
        return depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)];
    });
    return order;
}

ValidationReport validate_instance(const Instance& instance) {
    ValidationReport report;
    const auto& jobs = instance.jobs();
    const int n = instance.size();

    std::set<JobId> seen;
    for (int i = 0; i < n; ++i) {
        const Job& j = jobs[static_cast<std::size_t>(i)];
        if (j.id != i)
            report.issues.push_back({"non_dense_id",
                                     "job at position " + std::to_string(i) + " has id " + std::to_string(j.id),
                                     j.id});
        if (!seen.insert(j.id).second)
            report.issues.push_back({"duplicate_id", "job id " + std::to_string(j.id) + " repeats", j.id});
        if (j.release < 0)
            report.issues.push_back({"negative_release",
                                     "job " + std::to_string(j.id) + " has release " + std::to_string(j.release),
                                     j.id});
        if (j.parent && (*j.parent < 0 || *j.parent >= n))
            report.issues.push_back({"parent_out_of_range",
                                     "job " + std::to_string(j.id) + " points to " + std::to_string(*j.parent),
                                     j.id});
        if (j.parent && *j.parent == j.id)
            report.issues.push_back({"cycle", "job " + std::to_string(j.id) + " is its own successor", j.id});
    }
    if (!report.ok()) return report;

    // Walk parent chains; any chain longer than n closes a cycle.
    for (int i = 0; i < n; ++i) {
        std::optional<JobId> cur = jobs[static_cast<std::size_t>(i)].parent;
        int steps = 0;
        while (cur) {
            if (++steps > n) {
                report.issues.push_back({"cycle", "parent chain from job " + std::to_string(i) + " cycles",
                                         static_cast<JobId>(i)});
                break;
            }
            cur = instance.parent(*cur);
        }
    }
    return report;
}

} // namespace normsched
