#include "normsched/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

namespace normsched {

bool is_l_normal(const Dyadic& x, unsigned l) { return x.is_l_normal(l); }

std::optional<int> abnormality_point(const BlockPartition& partition) {
    for (int idx = 0; idx < partition.block_count(); ++idx) {
        const unsigned level = static_cast<unsigned>(idx) + 1;  // block i must be i-normal
        if (!partition.block_length(idx).is_l_normal(level)) return idx + 1;
        for (const auto& [job, amt] : partition.xi[static_cast<std::size_t>(idx)])
            if (!amt.is_zero() && !amt.is_l_normal(level + 1)) return idx + 1;
    }
    return std::nullopt;
}

ShiftReport shifts_and_resolution(const IntervalSchedule& schedule) {
    ShiftReport report;
    std::set<Dyadic> points;
    for (const auto& lane : schedule.machines) {
        for (const Piece& p : lane) {
            points.insert(p.start);
            points.insert(p.end);
        }
    }
    report.points.assign(points.begin(), points.end());
    for (std::size_t i = 1; i < report.points.size(); ++i)
        report.shifts.push_back(report.points[i] - report.points[i - 1]);
    if (!report.shifts.empty()) {
        Dyadic res = report.shifts.front();
        for (const Dyadic& s : report.shifts) res = min(res, s);
        report.resolution = res;
    }
    return report;
}

int count_preemptions(const IntervalSchedule& schedule, JobId job) {
    auto runs = schedule.runs_of(job);
    if (runs.empty()) throw std::invalid_argument("count_preemptions: job " + std::to_string(job) + " absent");
    return static_cast<int>(runs.size()) - 1;
}

std::string to_string(DiagnosisKind kind) {
    switch (kind) {
        case DiagnosisKind::NonSpanningCompletion: return "NonSpanningCompletion";
        case DiagnosisKind::TooManyJobsInBlock: return "TooManyJobsInBlock";
        case DiagnosisKind::IdleTimeViolation: return "IdleTimeViolation";
        case DiagnosisKind::Interlace: return "Interlace";
        case DiagnosisKind::CcdConfiguration: return "CcdConfiguration";
        case DiagnosisKind::BetweenPreemptions: return "BetweenPreemptions";
        case DiagnosisKind::AbnormalBlock: return "AbnormalBlock";
    }
    return "?";
}

namespace {

std::vector<JobId> active_jobs(const BlockPartition& partition, int idx) {
    std::vector<JobId> jobs;
    for (const auto& [job, amt] : partition.xi[static_cast<std::size_t>(idx)])
        if (!amt.is_zero()) jobs.push_back(job);
    return jobs;
}

bool spanning(const BlockPartition& partition, int idx, JobId job) {
    return partition.amount(idx, job) == partition.block_length(idx);
}

/// Jobs completing exactly at the right end of block idx in every
/// realization: last positive block is idx and the amount spans it.
std::vector<JobId> completes_at_block_end(const BlockPartition& partition, int idx) {
    std::vector<JobId> jobs;
    for (JobId job : active_jobs(partition, idx)) {
        auto tau = partition.last_block(job);
        if (tau && *tau == idx && spanning(partition, idx, job)) jobs.push_back(job);
    }
    return jobs;
}

} // namespace

std::optional<InterlaceWitness> find_interlace(const Instance& instance, const BlockPartition& partition) {
    struct Candidate {
        int tau_a;
        int t;
        JobId a;
        JobId b;
    };
    std::optional<Candidate> best;
    const int blocks = partition.block_count();

    for (const Job& ja : instance.jobs()) {
        auto tau_a = partition.last_block(ja.id);
        if (!tau_a) continue;
        for (const Job& jb : instance.jobs()) {
            if (ja.id == jb.id) continue;
            auto tau_b = partition.last_block(jb.id);
            if (!tau_b || *tau_a >= *tau_b) continue;
            if (spanning(partition, *tau_a, jb.id)) continue;
            for (int t = 0; t < *tau_a && t < blocks; ++t) {
                if (spanning(partition, t, ja.id)) continue;
                if (partition.amount(t, jb.id).is_zero()) continue;
                if (Dyadic(instance.release(ja.id)) >= partition.events[static_cast<std::size_t>(t) + 1]) continue;
                bool independent = true;
                for (int u = t; u <= *tau_a && independent; ++u)
                    for (JobId other : active_jobs(partition, u))
                        if (other != ja.id && !instance.independent(ja.id, other)) {
                            independent = false;
                            break;
                        }
                if (!independent) continue;
                Candidate c{*tau_a, t, ja.id, jb.id};
                if (!best || std::tie(c.tau_a, c.t, c.a, c.b) < std::tie(best->tau_a, best->t, best->a, best->b))
                    best = c;
                break;  // smallest t for this (a, b)
            }
        }
    }
    if (!best) return std::nullopt;
    return InterlaceWitness{best->a, best->b, best->t + 1};
}

std::vector<AConfiguration> find_a_configurations(const Instance& instance, const BlockPartition& partition) {
    IntervalSchedule schedule = realize(instance, partition);
    BlockPartition derived = derive_partition(instance, schedule);
    const auto& events = derived.events;

    auto event_index = [&](const Dyadic& t) -> std::optional<int> {
        for (std::size_t k = 0; k < events.size(); ++k)
            if (events[k] == t) return static_cast<int>(k);
        return std::nullopt;
    };

    std::vector<AConfiguration> found;
    for (JobId a : schedule.jobs()) {
        auto runs_a = schedule.runs_of(a);
        const auto& last_run = runs_a.back();
        const Dyadic completion_a = last_run.second;
        const Dyadic length = last_run.second - last_run.first;
        auto j = event_index(completion_a);
        if (!j) continue;

        for (JobId b : schedule.jobs()) {
            if (b == a) continue;
            auto runs_b = schedule.runs_of(b);
            const Dyadic completion_b = runs_b.back().second;
            if (completion_b <= completion_a) continue;
            // b runs without interruption through [e_j, e_j'] ...
            if (runs_b.back().first > completion_a) continue;
            // ... touches nothing of [e_j - l, e_j] ...
            bool executes_in_tail = false;
            for (const auto& run : runs_b)
                if (max(run.first, last_run.first) < min(run.second, completion_a)) executes_in_tail = true;
            if (executes_in_tail) continue;
            // ... and started strictly before e_j - l.
            if (runs_b.front().first >= last_run.first) continue;

            auto jp = event_index(completion_b);
            if (!jp) continue;
            bool independent = true;
            for (int u = *j; u <= *jp && u < derived.block_count() && independent; ++u)
                for (JobId other : active_jobs(derived, u))
                    if (other != a && !instance.independent(a, other)) {
                        independent = false;
                        break;
                    }
            if (!independent) continue;
            found.push_back({a, b, completion_a, length, completion_b});
        }
    }
    std::sort(found.begin(), found.end(), [](const AConfiguration& x, const AConfiguration& y) {
        return std::tie(x.at_event, x.a, x.b) < std::tie(y.at_event, y.a, y.b);
    });
    return found;
}

std::vector<AlternatingChain> find_alternating_chains(const Instance& instance, const BlockPartition& partition) {
    std::vector<AlternatingChain> chains;
    auto abnormal = abnormality_point(partition);
    if (!abnormal) return chains;
    const int i = *abnormal;     // 1-based
    const int idx = i - 1;       // block array index
    const unsigned level = static_cast<unsigned>(i);

    std::vector<JobId> abnormal_jobs;
    for (const auto& [job, amt] : partition.xi[static_cast<std::size_t>(idx)])
        if (!amt.is_zero() && !amt.is_l_normal(level + 1)) abnormal_jobs.push_back(job);

    IntervalSchedule schedule = realize(instance, partition);
    const Dyadic anchor = partition.events[static_cast<std::size_t>(idx) + 1];  // e_{i+1}

    auto last_run = [&](JobId job) { return schedule.runs_of(job).back(); };
    auto runs_from = [&](JobId job, const Dyadic& from) {
        // job executes non-preemptively in [from, C(job)]
        auto run = last_run(job);
        return run.first <= from && run.second > from;
    };

    for (JobId root : abnormal_jobs) {
        if (!runs_from(root, anchor)) continue;
        AlternatingChain chain{{root}, anchor, i};

        // C0: extending past length one requires |A_i| = 2 with the partner
        // as d_2, and d_1 completing at e_{i+2}.
        if (abnormal_jobs.size() == 2) {
            auto tau_root = partition.last_block(root);
            if (tau_root && *tau_root == idx + 1) {
                JobId partner = abnormal_jobs[0] == root ? abnormal_jobs[1] : abnormal_jobs[0];
                Dyadic c_root = schedule.completion_time(root);
                if (schedule.completion_time(partner) > c_root && runs_from(partner, anchor)) {
                    chain.jobs.push_back(partner);
                    // greedy extension while C1 and C2 hold
                    while (true) {
                        const JobId d_prev2 = chain.jobs[chain.jobs.size() - 2];
                        const JobId d_prev = chain.jobs.back();
                        const Dyadic from = schedule.completion_time(d_prev2);
                        const Dyadic c_prev = schedule.completion_time(d_prev);
                        std::optional<JobId> next;
                        Dyadic next_c;
                        for (JobId w : schedule.jobs()) {
                            if (std::find(chain.jobs.begin(), chain.jobs.end(), w) != chain.jobs.end()) continue;
                            Dyadic c_w = schedule.completion_time(w);
                            if (c_w <= c_prev) continue;
                            if (!runs_from(w, from)) continue;
                            if (!next || std::tie(c_w, w) < std::tie(next_c, *next)) {
                                next = w;
                                next_c = c_w;
                            }
                        }
                        if (!next) break;
                        chain.jobs.push_back(*next);
                    }
                }
            }
        }
        chains.push_back(std::move(chain));
    }
    return chains;
}

std::vector<Diagnosis> lint(const Instance& instance, const BlockPartition& partition, LintOptions options) {
    std::vector<Diagnosis> out;
    const int blocks = partition.block_count();
    IntervalSchedule schedule = realize(instance, partition);

    auto canon_start = [&](JobId job) { return schedule.start_time(job); };

    // every job spans its final block
    for (const Job& j : instance.jobs()) {
        auto tau = partition.last_block(j.id);
        if (!tau) continue;
        if (!spanning(partition, *tau, j.id))
            out.push_back({DiagnosisKind::NonSpanningCompletion, *tau + 1, {j.id},
                           "xi=" + partition.amount(*tau, j.id).str() + " < len=" + partition.block_length(*tau).str()});
    }

    // |J(xi_i)| <= 3, and 3 active jobs force a completion at the block end
    for (int idx = 0; idx < blocks; ++idx) {
        auto active = active_jobs(partition, idx);
        if (active.size() > 3) {
            out.push_back({DiagnosisKind::TooManyJobsInBlock, idx + 1, active,
                           std::to_string(active.size()) + " active jobs"});
        } else if (active.size() == 3 && completes_at_block_end(partition, idx).empty()) {
            out.push_back({DiagnosisKind::TooManyJobsInBlock, idx + 1, active,
                           "3 active jobs but none completes at the block end"});
        }
    }

    // no idle time next to a waiting preempted job
    for (int idx = 0; idx < blocks; ++idx) {
        const Dyadic len = partition.block_length(idx);
        if (partition.block_total(idx) >= len + len) continue;  // block is full
        for (const Job& j : instance.jobs()) {
            auto tau = partition.last_block(j.id);
            if (!tau) continue;
            if (spanning(partition, idx, j.id)) continue;
            if (canon_start(j.id) > partition.events[static_cast<std::size_t>(idx)]) continue;
            if (*tau <= idx) continue;  // must complete at e_{i+1} or later; non-spanning rules out equality
            out.push_back({DiagnosisKind::IdleTimeViolation, idx + 1, {j.id},
                           "idle capacity while job " + std::to_string(j.id) + " spans the block boundary"});
            break;
        }
    }

    if (auto witness = find_interlace(instance, partition)) {
        out.push_back({DiagnosisKind::Interlace, witness->t, {witness->a, witness->b},
                       "piece of " + std::to_string(witness->a) + " exchangeable with " + std::to_string(witness->b) +
                           " in block " + std::to_string(witness->t)});
    }

    // ccd: two jobs complete at e_j, a third running from before e_j completes
    // at e_{j+1}, and the set is independent
    for (int idx = 0; idx + 1 < blocks; ++idx) {
        auto cc = completes_at_block_end(partition, idx);
        if (cc.size() < 2) continue;
        for (JobId d : completes_at_block_end(partition, idx + 1)) {
            if (canon_start(d) >= partition.events[static_cast<std::size_t>(idx) + 1]) continue;
            std::vector<JobId> group{cc[0], cc[1]};
            for (JobId x : active_jobs(partition, idx + 1))
                if (std::find(group.begin(), group.end(), x) == group.end()) group.push_back(x);
            bool independent = true;
            for (std::size_t x = 0; x < group.size() && independent; ++x)
                for (std::size_t y = x + 1; y < group.size(); ++y)
                    if (!instance.independent(group[x], group[y])) {
                        independent = false;
                        break;
                    }
            if (!independent) continue;
            out.push_back({DiagnosisKind::CcdConfiguration, idx + 2, {cc[0], cc[1], d},
                           "jobs " + std::to_string(cc[0]) + "," + std::to_string(cc[1]) + " complete at " +
                               partition.events[static_cast<std::size_t>(idx) + 1].str() + ", job " +
                               std::to_string(d) + " at " + partition.events[static_cast<std::size_t>(idx) + 2].str()});
            break;
        }
    }

    // between-preemptions: a runs in blocks J and J' (J < J'-1) spanning all
    // blocks between; a' completes at e_{J'} while absent from block J and no
    // successor of a' starts there; then a' must start after e_{J+1} and a
    // must complete past block J'.
    for (const Job& ja : instance.jobs()) {
        const JobId a = ja.id;
        for (int J = 0; J < blocks; ++J) {
            if (partition.amount(J, a).is_zero()) continue;
            for (int Jp = J + 2; Jp < blocks; ++Jp) {
                if (partition.amount(Jp, a).is_zero()) continue;
                bool spans_between = true;
                for (int t = J + 1; t < Jp && spans_between; ++t)
                    if (!spanning(partition, t, a)) spans_between = false;
                if (!spans_between) continue;
                for (const Job& jap : instance.jobs()) {
                    const JobId ap = jap.id;
                    if (ap == a) continue;
                    if (!partition.amount(J, ap).is_zero()) continue;
                    auto tau_ap = partition.last_block(ap);
                    if (!tau_ap || *tau_ap != Jp - 1 || !spanning(partition, Jp - 1, ap)) continue;
                    bool successor_starts = false;
                    for (const Job& js : instance.jobs())
                        if (instance.precedes(ap, js.id) && partition.first_block(js.id) &&
                            *partition.first_block(js.id) == Jp &&
                            canon_start(js.id) == partition.events[static_cast<std::size_t>(Jp)])
                            successor_starts = true;
                    if (successor_starts) continue;
                    auto tau_a = partition.last_block(a);
                    const bool conclusion =
                        canon_start(ap) >= partition.events[static_cast<std::size_t>(J) + 1] && tau_a && *tau_a > Jp - 1;
                    if (!conclusion)
                        out.push_back({DiagnosisKind::BetweenPreemptions, Jp + 1, {a, ap},
                                       "job " + std::to_string(ap) + " squeezed between preemptions of " +
                                           std::to_string(a)});
                }
            }
        }
    }

    if (options.include_abnormal) {
        if (auto abnormal = abnormality_point(partition))
            out.push_back({DiagnosisKind::AbnormalBlock, *abnormal, {},
                           "block " + std::to_string(*abnormal) + " is not " + std::to_string(*abnormal) + "-normal"});
    }

    std::stable_sort(out.begin(), out.end(), [](const Diagnosis& x, const Diagnosis& y) {
        if (x.kind != y.kind) return x.kind < y.kind;
        return x.block < y.block;
    });
    return out;
}

std::string diagnoses_to_json(const std::vector<Diagnosis>& diagnoses) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Diagnosis& d : diagnoses) {
        nlohmann::json item{{"kind", to_string(d.kind)}, {"witness", d.witness}};
        if (d.block) item["block"] = *d.block;
        item["jobs"] = d.jobs;
        arr.push_back(std::move(item));
    }
    return arr.dump();
}

} // namespace normsched
