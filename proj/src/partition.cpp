#include "normsched/partition.hpp"

#include <sstream>

namespace normsched {

namespace {

std::string block_job_msg(const char* what, int block, JobId job, const std::string& detail) {
    std::ostringstream os;
    os << what << " in block " << (block + 1);
    if (job >= 0) os << " for job " << job;
    if (!detail.empty()) os << " (" << detail << ")";
    return os.str();
}

} // namespace

std::optional<int> BlockPartition::last_block(JobId job) const {
    for (int i = block_count() - 1; i >= 0; --i) {
        auto it = xi[static_cast<std::size_t>(i)].find(job);
        if (it != xi[static_cast<std::size_t>(i)].end() && !it->second.is_zero()) return i;
    }
    return std::nullopt;
}

std::optional<int> BlockPartition::first_block(JobId job) const {
    for (int i = 0; i < block_count(); ++i) {
        auto it = xi[static_cast<std::size_t>(i)].find(job);
        if (it != xi[static_cast<std::size_t>(i)].end() && !it->second.is_zero()) return i;
    }
    return std::nullopt;
}

void BlockPartition::canonicalize() {
    std::vector<Dyadic> new_events;
    std::vector<std::map<JobId, Dyadic>> new_xi;
    if (events.empty()) return;
    new_events.push_back(events.front());
    for (int i = 0; i < block_count(); ++i) {
        std::map<JobId, Dyadic> cleaned;
        for (const auto& [job, amt] : xi[static_cast<std::size_t>(i)])
            if (!amt.is_zero()) cleaned.emplace(job, amt);
        const Dyadic& end = events[static_cast<std::size_t>(i) + 1];
        if (end == new_events.back()) {
            // zero-length block: fold any (necessarily zero) amounts away
            continue;
        }
        new_events.push_back(end);
        new_xi.push_back(std::move(cleaned));
    }
    events = std::move(new_events);
    xi = std::move(new_xi);
}

ValidationReport partition_feasible(const Instance& instance, const BlockPartition& partition) {
    ValidationReport report;
    const int blocks = partition.block_count();

    if (partition.events.size() != static_cast<std::size_t>(blocks) + 1) {
        report.issues.push_back({"shape", "events/xi size mismatch", std::nullopt});
        return report;
    }
    if (blocks == 0) {
        report.issues.push_back({"shape", "partition has no blocks", std::nullopt});
        return report;
    }
    if (!partition.events.front().is_zero())
        report.issues.push_back({"events", "first event must be 0", std::nullopt});
    for (int i = 0; i + 1 < static_cast<int>(partition.events.size()); ++i)
        if (partition.events[static_cast<std::size_t>(i)] >= partition.events[static_cast<std::size_t>(i) + 1])
            report.issues.push_back({"events", "events not strictly increasing at index " + std::to_string(i + 1),
                                     std::nullopt});
    if (!report.ok()) return report;

    for (int i = 0; i < blocks; ++i) {
        const Dyadic len = partition.block_length(i);
        Dyadic total;
        for (const auto& [job, amt] : partition.xi[static_cast<std::size_t>(i)]) {
            if (job < 0 || job >= instance.size()) {
                report.issues.push_back({"unknown_job", block_job_msg("unknown job", i, job, ""), job});
                continue;
            }
            if (amt.is_negative())
                report.issues.push_back({"negative_amount", block_job_msg("negative amount", i, job, amt.str()), job});
            if (amt > len)
                report.issues.push_back({"amount_exceeds_block",
                                         block_job_msg("amount exceeds block length", i, job,
                                                       amt.str() + " > " + len.str()),
                                         job});
            if (!amt.is_zero() && Dyadic(instance.release(job)) > partition.events[static_cast<std::size_t>(i)])
                report.issues.push_back({"release_violated",
                                         block_job_msg("job released after block start", i, job,
                                                       "r=" + std::to_string(instance.release(job))),
                                         job});
            total += amt;
        }
        if (total > len + len)
            report.issues.push_back({"capacity_exceeded",
                                     block_job_msg("block load exceeds two machines", i, -1,
                                                   total.str() + " > 2*" + len.str()),
                                     std::nullopt});
    }

    for (const Job& j : instance.jobs()) {
        Dyadic total = partition.job_total(j.id);
        if (total != Dyadic::one())
            report.issues.push_back({"bad_total",
                                     "job " + std::to_string(j.id) + " totals " + total.str() + ", expected 1",
                                     j.id});
    }

    // Precedence: for each edge a -> parent(a), every block of the parent
    // must come strictly after a's last block. Edge checks suffice for the
    // transitive relation on in-trees.
    for (const Job& j : instance.jobs()) {
        if (!j.parent) continue;
        auto tau = partition.last_block(j.id);
        auto succ_first = partition.first_block(*j.parent);
        if (tau && succ_first && *succ_first <= *tau)
            report.issues.push_back({"precedence_violated",
                                     "job " + std::to_string(*j.parent) + " starts in block " +
                                         std::to_string(*succ_first + 1) + " but its predecessor " +
                                         std::to_string(j.id) + " still runs in block " + std::to_string(*tau + 1),
                                     j.id});
    }
    return report;
}

} // namespace normsched
