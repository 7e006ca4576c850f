#include "normsched/schedule.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace normsched {

std::vector<Piece> IntervalSchedule::pieces_of(JobId job) const {
    std::vector<Piece> out;
    for (const auto& lane : machines)
        for (const Piece& p : lane)
            if (p.job == job) out.push_back(p);
    std::sort(out.begin(), out.end(), [](const Piece& a, const Piece& b) { return a.start < b.start; });
    return out;
}

std::vector<std::pair<Dyadic, Dyadic>> IntervalSchedule::runs_of(JobId job) const {
    std::vector<std::pair<Dyadic, Dyadic>> runs;
    for (const Piece& p : pieces_of(job)) {
        if (!runs.empty() && runs.back().second == p.start)
            runs.back().second = p.end;
        else
            runs.emplace_back(p.start, p.end);
    }
    return runs;
}

Dyadic IntervalSchedule::start_time(JobId job) const {
    auto pieces = pieces_of(job);
    if (pieces.empty()) throw std::invalid_argument("start_time: job " + std::to_string(job) + " never runs");
    return pieces.front().start;
}

Dyadic IntervalSchedule::completion_time(JobId job) const {
    auto pieces = pieces_of(job);
    if (pieces.empty()) throw std::invalid_argument("completion_time: job " + std::to_string(job) + " never runs");
    Dyadic end = pieces.front().end;
    for (const Piece& p : pieces) end = max(end, p.end);
    return end;
}

Dyadic IntervalSchedule::total_of(JobId job) const {
    Dyadic total;
    for (const Piece& p : pieces_of(job)) total += p.length();
    return total;
}

Dyadic IntervalSchedule::work_from(JobId job, const Dyadic& from) const {
    Dyadic total;
    for (const Piece& p : pieces_of(job)) {
        Dyadic lo = max(p.start, from);
        if (lo < p.end) total += p.end - lo;
    }
    return total;
}

std::vector<JobId> IntervalSchedule::jobs() const {
    std::set<JobId> ids;
    for (const auto& lane : machines)
        for (const Piece& p : lane) ids.insert(p.job);
    return {ids.begin(), ids.end()};
}

std::array<std::vector<Piece>, 2> mcnaughton_block(const std::map<JobId, Dyadic>& amounts,
                                                   const Dyadic& block_start, const Dyadic& block_end) {
    const Dyadic len = block_end - block_start;
    if (len <= Dyadic::zero()) throw std::invalid_argument("mcnaughton_block: empty block");
    Dyadic total;
    for (const auto& [job, amt] : amounts) {
        if (amt.is_negative()) throw std::invalid_argument("mcnaughton_block: negative amount");
        if (amt > len)
            throw std::invalid_argument("mcnaughton_block: amount of job " + std::to_string(job) +
                                        " exceeds block length");
        total += amt;
    }
    if (total > len + len) throw std::invalid_argument("mcnaughton_block: aggregate exceeds two machines");

    std::array<std::vector<Piece>, 2> lanes;
    int machine = 0;
    Dyadic cursor = block_start;
    for (const auto& [job, amt] : amounts) {
        if (amt.is_zero()) continue;
        Dyadic remaining = amt;
        while (!remaining.is_zero()) {
            Dyadic room = block_end - cursor;
            if (room.is_zero()) {
                ++machine;
                cursor = block_start;
                continue;
            }
            Dyadic take = min(remaining, room);
            lanes[static_cast<std::size_t>(machine)].push_back({job, cursor, cursor + take});
            cursor += take;
            remaining -= take;
        }
    }
    return lanes;
}

namespace {

void append_merged(std::vector<Piece>& lane, const std::vector<Piece>& extra) {
    for (const Piece& p : extra) {
        if (!lane.empty() && lane.back().job == p.job && lane.back().end == p.start)
            lane.back().end = p.end;
        else
            lane.push_back(p);
    }
}

} // namespace

IntervalSchedule realize(const Instance& instance, const BlockPartition& partition) {
    ValidationReport feasible = partition_feasible(instance, partition);
    if (!feasible.ok()) throw FeasibilityError("realize: infeasible partition: " + feasible.to_string(), feasible);

    IntervalSchedule schedule;
    for (int i = 0; i < partition.block_count(); ++i) {
        std::map<JobId, Dyadic> amounts;
        for (const auto& [job, amt] : partition.xi[static_cast<std::size_t>(i)])
            if (!amt.is_zero()) amounts.emplace(job, amt);
        if (amounts.empty()) continue;
        auto lanes = mcnaughton_block(amounts, partition.events[static_cast<std::size_t>(i)],
                                      partition.events[static_cast<std::size_t>(i) + 1]);
        append_merged(schedule.machines[0], lanes[0]);
        append_merged(schedule.machines[1], lanes[1]);
    }
    return schedule;
}

BlockPartition derive_partition(const Instance& instance, const IntervalSchedule& schedule) {
    ValidationReport valid = validate_schedule(instance, schedule);
    if (!valid.ok()) throw FeasibilityError("derive_partition: invalid schedule: " + valid.to_string(), valid);

    std::set<Dyadic> points;
    points.insert(Dyadic::zero());
    for (JobId job : schedule.jobs()) {
        points.insert(schedule.start_time(job));
        points.insert(schedule.completion_time(job));
    }
    BlockPartition partition;
    partition.events.assign(points.begin(), points.end());
    partition.xi.assign(points.size() - 1, {});
    for (const auto& lane : schedule.machines) {
        for (const Piece& p : lane) {
            // distribute the piece over the blocks it crosses
            for (int i = 0; i < partition.block_count(); ++i) {
                Dyadic lo = max(p.start, partition.events[static_cast<std::size_t>(i)]);
                Dyadic hi = min(p.end, partition.events[static_cast<std::size_t>(i) + 1]);
                if (lo < hi) partition.xi[static_cast<std::size_t>(i)][p.job] += hi - lo;
            }
        }
    }
    partition.canonicalize();
    return partition;
}

ScheduleMetrics schedule_metrics(const IntervalSchedule& schedule) {
    ScheduleMetrics metrics;
    for (JobId job : schedule.jobs()) {
        Dyadic c = schedule.completion_time(job);
        metrics.completions.emplace(job, c);
        metrics.total_completion_time += c;
        metrics.makespan = max(metrics.makespan, c);
    }
    return metrics;
}

ValidationReport validate_schedule(const Instance& instance, const IntervalSchedule& schedule) {
    ValidationReport report;
    for (int m = 0; m < 2; ++m) {
        const auto& lane = schedule.machines[static_cast<std::size_t>(m)];
        for (std::size_t i = 0; i < lane.size(); ++i) {
            if (lane[i].start >= lane[i].end)
                report.issues.push_back({"empty_piece", "machine " + std::to_string(m + 1) + " has a degenerate piece",
                                         lane[i].job});
            if (i > 0 && lane[i - 1].end > lane[i].start)
                report.issues.push_back({"overlap", "machine " + std::to_string(m + 1) + " pieces overlap",
                                         lane[i].job});
        }
    }
    if (!report.ok()) return report;

    // a job must never run on both machines at once
    for (const Piece& p : schedule.machines[0]) {
        for (const Piece& q : schedule.machines[1]) {
            if (p.job != q.job) continue;
            if (max(p.start, q.start) < min(p.end, q.end))
                report.issues.push_back({"self_overlap",
                                         "job " + std::to_string(p.job) + " runs on both machines at once", p.job});
        }
    }

    for (JobId job : schedule.jobs()) {
        if (job < 0 || job >= instance.size()) {
            report.issues.push_back({"unknown_job", "job " + std::to_string(job) + " not in instance", job});
            continue;
        }
        if (schedule.total_of(job) != Dyadic::one())
            report.issues.push_back({"bad_total",
                                     "job " + std::to_string(job) + " totals " + schedule.total_of(job).str(), job});
        if (schedule.start_time(job) < Dyadic(instance.release(job)))
            report.issues.push_back({"release_violated",
                                     "job " + std::to_string(job) + " starts before its release", job});
    }
    for (const Job& j : instance.jobs()) {
        if (!j.parent) continue;
        auto mine = schedule.pieces_of(j.id);
        auto succ = schedule.pieces_of(*j.parent);
        if (mine.empty() || succ.empty()) continue;
        if (schedule.start_time(*j.parent) < schedule.completion_time(j.id))
            report.issues.push_back({"precedence_violated",
                                     "job " + std::to_string(*j.parent) + " starts before predecessor " +
                                         std::to_string(j.id) + " completes",
                                     j.id});
    }
    return report;
}

} // namespace normsched
