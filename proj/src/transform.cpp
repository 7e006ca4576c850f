#include "normsched/transform.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace normsched {

namespace {

Dyadic total_completion(const Instance& instance, const BlockPartition& partition) {
    return schedule_metrics(realize(instance, partition)).total_completion_time;
}

void add_amount(BlockPartition& partition, int block, JobId job, const Dyadic& delta) {
    auto& m = partition.xi[static_cast<std::size_t>(block)];
    Dyadic next = (m.count(job) ? m[job] : Dyadic::zero()) + delta;
    if (next.is_zero())
        m.erase(job);
    else
        m[job] = next;
}

TransformError infeasible(const char* what, ValidationReport report) {
    return TransformError{std::string(what) + ": " + report.to_string(), std::move(report)};
}

} // namespace

TransformResult cyclic_shift(const Instance& instance, const BlockPartition& partition, const CycleSpec& spec) {
    const std::size_t j = spec.blocks.size();
    if (j == 0 || spec.jobs.size() != j) return TransformError{"cyclic_shift: blocks/jobs size mismatch", {}};
    if (spec.epsilon <= Dyadic::zero()) return TransformError{"cyclic_shift: epsilon must be positive", {}};
    for (std::size_t k = 0; k < j; ++k)
        for (std::size_t l = k + 1; l < j; ++l)
            if (spec.jobs[k] == spec.jobs[l]) return TransformError{"cyclic_shift: jobs must be distinct", {}};
    for (int b : spec.blocks)
        if (b < 1 || b > partition.block_count()) return TransformError{"cyclic_shift: block index out of range", {}};

    for (std::size_t k = 0; k < j; ++k) {
        const int bk = spec.blocks[k] - 1;
        const int bk1 = spec.blocks[(k + 1) % j] - 1;
        if (partition.amount(bk, spec.jobs[k]) < spec.epsilon)
            return TransformError{"cyclic_shift: job " + std::to_string(spec.jobs[k]) + " has less than epsilon in block " +
                                      std::to_string(spec.blocks[k]),
                                  {}};
        if (partition.amount(bk1, spec.jobs[k]) > partition.block_length(bk1) - spec.epsilon)
            return TransformError{"cyclic_shift: job " + std::to_string(spec.jobs[k]) + " has no epsilon headroom in block " +
                                      std::to_string(spec.blocks[(k + 1) % j]),
                                  {}};
    }

    BlockPartition result = partition;
    for (std::size_t k = 0; k < j; ++k) {
        const int target = spec.blocks[(k + 1) % j] - 1;
        add_amount(result, target, spec.jobs[(k + 1) % j], -spec.epsilon);
        add_amount(result, target, spec.jobs[k], spec.epsilon);
    }
    result.canonicalize();

    ValidationReport report = partition_feasible(instance, result);
    if (!report.ok()) return infeasible("cyclic_shift: raw move breaks feasibility", std::move(report));
    return result;
}

namespace {

/// Splits block `idx` so that `job` spans the left part exactly; remaining
/// amounts are distributed right-first under the two-machine capacities.
void split_block_for(BlockPartition& partition, int idx, JobId job) {
    const Dyadic len = partition.block_length(idx);
    const Dyadic len1 = partition.amount(idx, job);
    const Dyadic len2 = len - len1;
    if (len1.is_zero() || len2.is_zero()) return;

    std::map<JobId, Dyadic> others = partition.xi[static_cast<std::size_t>(idx)];
    others.erase(job);

    std::map<JobId, Dyadic> left, right;
    left[job] = len1;
    Dyadic t2;
    for (const auto& [c, m] : others) {
        Dyadic m1 = max(m - len2, Dyadic::zero());
        left[c] = m1;
        right[c] = m - m1;
        t2 += m - m1;
    }
    // pull work leftwards until the right part fits two machines
    for (auto& [c, m1] : left) {
        if (c == job) continue;
        if (t2 <= len2 + len2) break;
        Dyadic m = others.at(c);
        Dyadic headroom = min(len1, m) - m1;
        Dyadic need = t2 - (len2 + len2);
        Dyadic take = min(headroom, need);
        if (take.is_zero()) continue;
        m1 += take;
        right[c] -= take;
        t2 -= take;
    }
    for (auto it = left.begin(); it != left.end();)
        it = it->second.is_zero() ? left.erase(it) : std::next(it);
    for (auto it = right.begin(); it != right.end();)
        it = it->second.is_zero() ? right.erase(it) : std::next(it);

    const Dyadic cut = partition.events[static_cast<std::size_t>(idx)] + len1;
    partition.events.insert(partition.events.begin() + idx + 1, cut);
    partition.xi[static_cast<std::size_t>(idx)] = std::move(left);
    partition.xi.insert(partition.xi.begin() + idx + 1, std::move(right));
}

} // namespace

TransformResult swap_jobs(const Instance& instance, const BlockPartition& partition, JobId a, JobId a_prime) {
    auto tau_a = partition.last_block(a);
    if (!tau_a) return TransformError{"swap_jobs: job " + std::to_string(a) + " has no executed amount", {}};
    const int k = *tau_a;
    if (k == 0) return TransformError{"swap_jobs: job " + std::to_string(a) + " completes in the first block", {}};

    auto tau_ap = partition.last_block(a_prime);
    if (!tau_ap || *tau_ap != k - 1 ||
        partition.amount(k - 1, a_prime) != partition.block_length(k - 1))
        return TransformError{"swap_jobs: job " + std::to_string(a_prime) + " does not complete at e_tau(a)", {}};

    IntervalSchedule schedule = realize(instance, partition);
    if (schedule.start_time(a) > schedule.start_time(a_prime))
        return TransformError{"swap_jobs: job " + std::to_string(a) + " starts after " + std::to_string(a_prime), {}};

    for (const auto& [other, amt] : partition.xi[static_cast<std::size_t>(k)])
        if (!amt.is_zero() && !instance.independent(a_prime, other))
            return TransformError{"swap_jobs: job " + std::to_string(a_prime) + " is not independent of job " +
                                      std::to_string(other) + " in the final block",
                                  {}};

    const Dyadic w = partition.amount(k, a);
    BlockPartition result = partition;

    // earliest blocks first at full capacity; the last block used carries the
    // minimal remainder, which keeps epsilon(max I) minimum
    Dyadic remaining = w;
    for (int t = 0; t < k && remaining > Dyadic::zero(); ++t) {
        Dyadic cap = min(partition.block_length(t) - partition.amount(t, a), partition.amount(t, a_prime));
        if (cap <= Dyadic::zero()) continue;
        Dyadic take = min(cap, remaining);
        add_amount(result, t, a_prime, -take);
        add_amount(result, t, a, take);
        remaining -= take;
    }
    if (!remaining.is_zero())
        return TransformError{"swap_jobs: insufficient capacity of " + std::to_string(a_prime) +
                                  " before block " + std::to_string(k + 1),
                              {}};

    add_amount(result, k, a_prime, w);
    add_amount(result, k, a, -w);

    // a' inherits a's slots: when the inherited amount does not span block k,
    // cut the block so a' completes exactly at e_k + xi_k(a), the earliest
    // point a could have completed
    if (result.amount(k, a_prime) != result.block_length(k)) split_block_for(result, k, a_prime);

    // pin a's completion the same way: cut its new final block so a ends
    // exactly after its amount
    auto new_tau = result.last_block(a);
    if (new_tau && result.amount(*new_tau, a) != result.block_length(*new_tau))
        split_block_for(result, *new_tau, a);
    result.canonicalize();

    ValidationReport report = partition_feasible(instance, result);
    if (!report.ok()) return infeasible("swap_jobs: result infeasible", std::move(report));
    return result;
}

std::string to_string(PushBound bound) {
    switch (bound) {
        case PushBound::Alpha: return "alpha";
        case PushBound::Beta: return "beta";
        case PushBound::Gamma: return "gamma";
        case PushBound::XYCap: return "xy_cap";
    }
    return "?";
}

Dyadic PushBounds::epsilon() const {
    Dyadic e = min(alpha, min(beta, xy_cap));
    if (gamma_bounded) e = min(e, gamma);
    return e;
}

PushBound PushBounds::binding() const {
    Dyadic e = epsilon();
    if (e == alpha) return PushBound::Alpha;
    if (e == beta) return PushBound::Beta;
    if (gamma_bounded && e == gamma) return PushBound::Gamma;
    return PushBound::XYCap;
}

PushBounds push_bounds(const Instance& instance, const BlockPartition& partition, const AlternatingChain& chain,
                       JobId x, JobId y) {
    const int l = static_cast<int>(chain.jobs.size());
    const int idx = chain.abnormality_point - 1;
    const int u = (l % 2 == 1) ? 2 : 1;
    const JobId d_u = chain.jobs[static_cast<std::size_t>(u - 1)];

    PushBounds bounds;
    bounds.alpha = partition.amount(idx, d_u);

    bool have_beta = false;
    for (int j = 1; j <= l; ++j) {
        if (j % 2 != l % 2) continue;  // j in U
        auto tau = partition.last_block(chain.jobs[static_cast<std::size_t>(j - 1)]);
        Dyadic half = partition.block_length(*tau).half();
        if (!have_beta || half < bounds.beta) bounds.beta = half;
        have_beta = true;
        if (j >= 3) {
            const JobId prev = chain.jobs[static_cast<std::size_t>(j - 2)];
            auto tau_prev = partition.last_block(prev);
            Dyadic slack = partition.events[static_cast<std::size_t>(*tau_prev)] -
                           Dyadic(instance.release(chain.jobs[static_cast<std::size_t>(j - 1)]));
            if (!bounds.gamma_bounded || slack < bounds.gamma) bounds.gamma = slack;
            bounds.gamma_bounded = true;
        }
    }
    auto fb = partition.last_block(chain.jobs.back());
    bounds.xy_cap = min(partition.amount(*fb, x), partition.amount(*fb, y));
    return bounds;
}

PushResult epsilon_push(const Instance& instance, const BlockPartition& partition, const AlternatingChain& chain,
                        JobId x, JobId y) {
    const int l = static_cast<int>(chain.jobs.size());
    if (l < 2) return TransformError{"epsilon_push: chain must have more than one job", {}};
    auto abnormal = abnormality_point(partition);
    if (!abnormal || *abnormal != chain.abnormality_point)
        return TransformError{"epsilon_push: chain abnormality point does not match the partition", {}};
    const int idx = chain.abnormality_point - 1;

    auto fb_opt = partition.last_block(chain.jobs.back());
    if (!fb_opt) return TransformError{"epsilon_push: last chain job never runs", {}};
    const int fb = *fb_opt;
    {
        std::vector<JobId> expected{chain.jobs.back(), x, y};
        std::sort(expected.begin(), expected.end());
        std::vector<JobId> active;
        for (const auto& [job, amt] : partition.xi[static_cast<std::size_t>(fb)])
            if (!amt.is_zero()) active.push_back(job);
        if (active != expected)
            return TransformError{"epsilon_push: final chain block must hold exactly {x, y, d_l}", {}};
    }

    // chain jobs must complete at block boundaries; collect completions
    std::vector<Dyadic> completions;  // c_1..c_l
    for (int j = 0; j < l; ++j) {
        auto tau = partition.last_block(chain.jobs[static_cast<std::size_t>(j)]);
        if (!tau || partition.amount(*tau, chain.jobs[static_cast<std::size_t>(j)]) != partition.block_length(*tau))
            return TransformError{"epsilon_push: chain job " + std::to_string(chain.jobs[static_cast<std::size_t>(j)]) +
                                      " does not span its final block",
                                  {}};
        completions.push_back(partition.events[static_cast<std::size_t>(*tau) + 1]);
    }

    const Dyadic anchor = partition.events[static_cast<std::size_t>(idx) + 1];
    // the zone between e_{i+1} and C(d_l) must consist of the chain blocks
    {
        std::vector<Dyadic> zone_events{anchor};
        zone_events.insert(zone_events.end(), completions.begin(), completions.end());
        std::vector<Dyadic> actual;
        for (const Dyadic& e : partition.events)
            if (e >= anchor && e <= completions.back()) actual.push_back(e);
        if (actual != zone_events) return TransformError{"epsilon_push: chain zone has unexpected events", {}};
        for (int j = 0; j < l; ++j) {
            const int zb = idx + 1 + j;
            std::vector<JobId> expected;
            if (j + 1 < l)
                expected = {chain.jobs[static_cast<std::size_t>(j)], chain.jobs[static_cast<std::size_t>(j) + 1]};
            else
                expected = {chain.jobs.back(), x, y};
            std::sort(expected.begin(), expected.end());
            std::vector<JobId> active;
            for (const auto& [job, amt] : partition.xi[static_cast<std::size_t>(zb)])
                if (!amt.is_zero()) active.push_back(job);
            if (active != expected) return TransformError{"epsilon_push: chain zone block " + std::to_string(zb + 1) +
                                                              " holds unexpected jobs",
                                                          {}};
        }
    }

    PushBounds bounds = push_bounds(instance, partition, chain, x, y);
    const Dyadic eps = bounds.epsilon();
    if (eps <= Dyadic::zero()) return TransformError{"epsilon_push: degenerate bound, epsilon would be 0", {}};
    const PushBound binding = bounds.binding();

    const int u = (l % 2 == 1) ? 2 : 1;
    const JobId d_u = chain.jobs[static_cast<std::size_t>(u - 1)];
    const JobId d_adv = chain.jobs[static_cast<std::size_t>(2 - u)];
    auto in_U = [&](int j) { return j % 2 == l % 2; };  // 1-based chain index

    std::vector<Dyadic> shifted;  // c'_1..c'_l
    for (int j = 1; j <= l; ++j)
        shifted.push_back(in_U(j) ? completions[static_cast<std::size_t>(j - 1)] - eps
                                  : completions[static_cast<std::size_t>(j - 1)] + eps);

    BlockPartition result;
    // everything up to and including block i, with the d_u/d_adv trade
    result.events.assign(partition.events.begin(), partition.events.begin() + idx + 2);
    result.xi.assign(partition.xi.begin(), partition.xi.begin() + idx + 1);
    add_amount(result, idx, d_u, -eps);
    add_amount(result, idx, d_adv, eps);

    // rebuilt chain zone
    Dyadic prev = anchor;
    for (int j = 1; j < l; ++j) {
        const Dyadic cur = shifted[static_cast<std::size_t>(j - 1)];
        std::map<JobId, Dyadic> block;
        block[chain.jobs[static_cast<std::size_t>(j - 1)]] = cur - prev;
        block[chain.jobs[static_cast<std::size_t>(j)]] = cur - prev;
        result.events.push_back(cur);
        result.xi.push_back(std::move(block));
        prev = cur;
    }
    {
        // final chain block plus the freed tail [C'(d_l), C(d_l)]
        const Dyadic c_l = completions.back();
        const Dyadic len_a = shifted.back() - prev;
        const Dyadic ax = partition.amount(fb, x);
        const Dyadic ay = partition.amount(fb, y);
        const JobId donor = (ax < ay || (ax == ay && x < y)) ? x : y;
        const JobId other = donor == x ? y : x;
        const Dyadic donor_amt = donor == x ? ax : ay;
        const Dyadic other_amt = donor == x ? ay : ax;
        const Dyadic L0 = completions.back() - completions[static_cast<std::size_t>(l - 2)];

        // donor keeps (amt - eps) packed first on the free machine and eps in
        // the tail; the other job follows, possibly crossing into the tail
        Dyadic other_in_tail = max(Dyadic::zero(), donor_amt + other_amt - (L0 - eps));
        std::map<JobId, Dyadic> final_block;
        final_block[chain.jobs.back()] = len_a;
        if (!(donor_amt - eps).is_zero()) final_block[donor] = donor_amt - eps;
        if (!(other_amt - other_in_tail).is_zero()) final_block[other] = other_amt - other_in_tail;
        result.events.push_back(shifted.back());
        result.xi.push_back(std::move(final_block));

        std::map<JobId, Dyadic> tail_block;
        tail_block[donor] = eps;
        if (!other_in_tail.is_zero()) tail_block[other] = other_in_tail;
        result.events.push_back(c_l);
        result.xi.push_back(std::move(tail_block));
    }
    // untouched remainder after C(d_l)
    for (std::size_t e = 0; e < partition.events.size(); ++e)
        if (partition.events[e] > completions.back()) result.events.push_back(partition.events[e]);
    for (int b = fb + 1; b < partition.block_count(); ++b)
        result.xi.push_back(partition.xi[static_cast<std::size_t>(b)]);

    result.canonicalize();
    ValidationReport report = partition_feasible(instance, result);
    if (!report.ok()) return infeasible("epsilon_push: result infeasible", std::move(report));
    return PushOutcome{std::move(result), eps, binding};
}

namespace {

std::optional<BlockPartition> try_ccd_fix(const Instance& instance, const BlockPartition& partition,
                                          const Diagnosis& diag, std::string& detail) {
    if (diag.jobs.size() != 3) return std::nullopt;
    const JobId d = diag.jobs[2];
    auto first_d = partition.first_block(d);
    if (!first_d) return std::nullopt;
    for (int pick = 0; pick < 2; ++pick) {
        const JobId c = diag.jobs[static_cast<std::size_t>(pick)];
        if (!partition.amount(*first_d, c).is_zero()) continue;
        auto result = swap_jobs(instance, partition, d, c);
        if (auto* ok = std::get_if<BlockPartition>(&result)) {
            detail = "swap(" + std::to_string(d) + ", " + std::to_string(c) + ")";
            return *ok;
        }
    }
    return std::nullopt;
}

std::optional<BlockPartition> try_interlace_fix(const Instance& instance, const BlockPartition& partition,
                                                std::string& detail) {
    auto witness = find_interlace(instance, partition);
    if (!witness) return std::nullopt;
    const int t = witness->t - 1;
    auto tau_a = partition.last_block(witness->a);
    if (!tau_a) return std::nullopt;
    Dyadic eps = min(min(partition.amount(t, witness->b),
                         partition.block_length(*tau_a) - partition.amount(*tau_a, witness->b)),
                     min(partition.amount(*tau_a, witness->a),
                         partition.block_length(t) - partition.amount(t, witness->a)));
    if (eps <= Dyadic::zero()) return std::nullopt;
    CycleSpec spec{{witness->t, *tau_a + 1}, {witness->b, witness->a}, eps};
    auto result = cyclic_shift(instance, partition, spec);
    if (auto* ok = std::get_if<BlockPartition>(&result)) {
        detail = "shift(" + std::to_string(witness->t) + " ->" + std::to_string(witness->b) + " " +
                 std::to_string(*tau_a + 1) + " ->" + std::to_string(witness->a) + " , eps=" + eps.str() + ")";
        return *ok;
    }
    return std::nullopt;
}

std::optional<BlockPartition> try_push_fix(const Instance& instance, const BlockPartition& partition,
                                           std::string& detail) {
    for (const AlternatingChain& chain : find_alternating_chains(instance, partition)) {
        if (chain.jobs.size() < 2) continue;
        auto fb = partition.last_block(chain.jobs.back());
        if (!fb) continue;
        std::vector<JobId> others;
        for (const auto& [job, amt] : partition.xi[static_cast<std::size_t>(*fb)])
            if (!amt.is_zero() && job != chain.jobs.back()) others.push_back(job);
        if (others.size() != 2) continue;
        auto result = epsilon_push(instance, partition, chain, others[0], others[1]);
        if (auto* ok = std::get_if<PushOutcome>(&result)) {
            detail = "push(d_l=" + std::to_string(chain.jobs.back()) + ", eps=" + ok->epsilon_used.str() +
                     ", binding=" + to_string(ok->binding) + ")";
            return ok->partition;
        }
    }
    return std::nullopt;
}

} // namespace

ImproveResult improve(const Instance& instance, const BlockPartition& partition, int max_rounds) {
    ImproveResult out{partition, {}};
    for (int round = 0; round < max_rounds; ++round) {
        Dyadic before = total_completion(instance, out.partition);
        auto diagnoses = lint(instance, out.partition, {.include_abnormal = true});
        if (diagnoses.empty()) break;

        std::optional<BlockPartition> next;
        std::string kind, detail;
        for (const Diagnosis& diag : diagnoses) {
            if (diag.kind != DiagnosisKind::CcdConfiguration) continue;
            if ((next = try_ccd_fix(instance, out.partition, diag, detail))) {
                kind = "ccd-swap";
                break;
            }
        }
        if (!next && (next = try_interlace_fix(instance, out.partition, detail))) kind = "interlace-shift";
        if (!next && (next = try_push_fix(instance, out.partition, detail))) kind = "epsilon-push";
        if (!next) break;

        Dyadic after = total_completion(instance, *next);
        if (after > before) break;  // refuse a worsening move and stop
        out.partition = std::move(*next);
        out.applied.push_back({kind, detail, before, after});
    }
    return out;
}

std::string trace_to_json(const std::vector<TransformationRecord>& trace) {
    nlohmann::json arr = nlohmann::json::array();
    for (const TransformationRecord& r : trace)
        arr.push_back(nlohmann::json{{"detail", r.detail},
                                     {"kind", r.kind},
                                     {"total_after", r.total_after.str()},
                                     {"total_before", r.total_before.str()}});
    return arr.dump();
}

} // namespace normsched
