#include "normsched/instances.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace normsched {

namespace {

JobId jp_id(int level, int j) { return 4 * level + j - 1; }  // a_j^level

} // namespace

Instance make_jp(int p) {
    if (p < 0) throw std::invalid_argument("make_jp: p must be nonnegative");
    std::vector<Job> jobs;
    for (int i = 0; i <= p; ++i) {
        for (int j = 1; j <= 3; ++j) jobs.push_back({jp_id(i, j), 2 * i, jp_id(i, 4)});
        Job a4{jp_id(i, 4), 2 * i + 1, std::nullopt};
        if (i < p) a4.parent = jp_id(i + 1, 4);
        jobs.push_back(a4);
    }
    return Instance(std::move(jobs));
}

IntervalSchedule make_pp_schedule(int p) {
    if (p < 0) throw std::invalid_argument("make_pp_schedule: p must be nonnegative");
    IntervalSchedule s;
    auto& m1 = s.machines[0];
    auto& m2 = s.machines[1];

    // level 0: a_1,a_2,a_3 fill [0,3/2] wrap-around; a_4^0 follows on the
    // chain machine
    m1.push_back({jp_id(0, 1), Dyadic(0), Dyadic(1)});
    m1.push_back({jp_id(0, 2), Dyadic(1), Dyadic(3).half()});
    m2.push_back({jp_id(0, 2), Dyadic(0), Dyadic(1).half()});
    m2.push_back({jp_id(0, 3), Dyadic(1).half(), Dyadic(3).half()});
    m1.push_back({jp_id(0, 4), Dyadic(3).half(), Dyadic(5).half()});

    for (int i = 1; i <= p; ++i) {
        const Dyadic gap(BigInt(1), static_cast<unsigned>(i));        // 1/2^i
        const Dyadic gap_next(BigInt(1), static_cast<unsigned>(i) + 1);  // 1/2^{i+1}
        const Dyadic t0(2 * i);
        // chain machine: a_2 first piece abuts a_4^{i-1}, then a_3, then a_4
        m1.push_back({jp_id(i, 2), t0 + Dyadic(1) - gap, t0 + Dyadic(1) - gap_next});
        m1.push_back({jp_id(i, 3), t0 + Dyadic(1) - gap_next, t0 + Dyadic(2) - gap_next});
        m1.push_back({jp_id(i, 4), t0 + Dyadic(2) - gap_next, t0 + Dyadic(3) - gap_next});
        // other machine: a_1 then the second piece of a_2
        m2.push_back({jp_id(i, 1), t0, t0 + Dyadic(1)});
        m2.push_back({jp_id(i, 2), t0 + Dyadic(1), t0 + Dyadic(2) - gap_next});
    }
    return s;
}

long theorem_default_chain_length(int p) {
    // l = C(a_4^p) * 2^c with c = 2|J_p| + 3; C = 2p+3 - 1/2^{p+1}
    const int c = 2 * 4 * (p + 1) + 3;
    const Dyadic completion = Dyadic(2 * p + 3) - Dyadic(BigInt(1), static_cast<unsigned>(p) + 1);
    Dyadic scaled = completion.scaled(BigInt(1) << c);
    BigInt value = scaled.numerator();  // exponent is 0 for c >= p+1
    if (value > kTheoremChainCap) return -1;
    return static_cast<long>(value);
}

namespace {

long resolve_chain_length(int p, std::optional<long> chain_length) {
    if (chain_length) {
        if (*chain_length < 1) throw std::invalid_argument("chain_length must be positive");
        return *chain_length;
    }
    long l = theorem_default_chain_length(p);
    if (l < 0)
        throw std::invalid_argument("make_theorem_instance: default chain length exceeds cap for p=" +
                                    std::to_string(p) + "; pass chain_length explicitly");
    return l;
}

} // namespace

Instance make_theorem_instance(int p, std::optional<long> chain_length) {
    const long l = resolve_chain_length(p, chain_length);
    Instance jp = make_jp(p);
    std::vector<Job> jobs = jp.jobs();
    const JobId a4p = jp_id(p, 4);
    const JobId pivot = static_cast<JobId>(jobs.size());
    const JobId b1 = pivot + 1;
    jobs[static_cast<std::size_t>(a4p)].parent = b1;
    jobs.push_back({pivot, 0, b1});
    for (long k = 0; k < l; ++k)
        jobs.push_back({b1 + static_cast<JobId>(k), 0,
                        k + 1 < l ? std::optional<JobId>(b1 + static_cast<JobId>(k) + 1) : std::nullopt});
    return Instance(std::move(jobs));
}

IntervalSchedule make_theorem_companion_schedule(int p, std::optional<long> chain_length) {
    const long l = resolve_chain_length(p, chain_length);
    IntervalSchedule s = make_pp_schedule(p);
    const JobId pivot = 4 * (p + 1);
    const JobId b1 = pivot + 1;

    // the pivot fills each level's idle gap [2i+2 - 1/2^{i+1}, 2i+2]; the
    // last gap continues into a final piece ending at 2(p+1) + 1/2^{p+1}
    for (int i = 0; i <= p; ++i) {
        const Dyadic gap(BigInt(1), static_cast<unsigned>(i) + 1);
        Dyadic lo = Dyadic(2 * i + 2) - gap;
        Dyadic hi = Dyadic(2 * i + 2);
        if (i == p) hi += gap;
        s.machines[1].push_back({pivot, lo, hi});
    }
    std::sort(s.machines[1].begin(), s.machines[1].end(),
              [](const Piece& a, const Piece& b) { return a.start < b.start; });
    // chain jobs run back to back after a_4^p on the chain machine
    Dyadic t = Dyadic(2 * p + 3) - Dyadic(BigInt(1), static_cast<unsigned>(p) + 1);
    for (long k = 0; k < l; ++k) {
        s.machines[0].push_back({b1 + static_cast<JobId>(k), t, t + Dyadic(1)});
        t += Dyadic(1);
    }
    return s;
}

Instance random_intree(int n, std::int64_t max_release, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_intree: n must be positive");
    std::mt19937_64 rng(seed);
    std::vector<Job> jobs;
    for (int i = 0; i < n; ++i) {
        Job j;
        j.id = i;
        // choice among {i+1..n-1} and "no successor"
        const std::uint64_t choices = static_cast<std::uint64_t>(n - i);
        std::uint64_t pick = rng() % choices;
        if (pick + 1 < choices) j.parent = i + 1 + static_cast<int>(pick);
        j.release = max_release > 0 ? static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_release + 1))
                                    : 0;
        jobs.push_back(j);
    }
    return Instance(std::move(jobs));
}

IntervalSchedule random_feasible_schedule(const Instance& instance, unsigned grid_k, std::uint64_t seed) {
    const int n = instance.size();
    std::mt19937_64 rng(seed);
    const long unit = 1L << grid_k;
    std::int64_t max_release = 0;
    for (const Job& j : instance.jobs()) max_release = std::max(max_release, j.release);
    const long total_slots = (max_release + n) * unit;

    std::vector<long> rem(static_cast<std::size_t>(n), unit);
    std::vector<std::vector<JobId>> preds(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) preds[static_cast<std::size_t>(a)] = instance.immediate_predecessors(a);

    IntervalSchedule s;
    std::array<int, 2> last{-1, -1};
    long finished = 0;
    const Dyadic width(BigInt(1), grid_k);
    for (long slot = 0; slot < total_slots && finished < n; ++slot) {
        std::vector<int> avail;
        for (int a = 0; a < n; ++a) {
            if (rem[static_cast<std::size_t>(a)] == 0) continue;
            if (instance.release(a) * unit > slot) continue;
            bool ready = true;
            for (JobId p : preds[static_cast<std::size_t>(a)])
                if (rem[static_cast<std::size_t>(p)] > 0) ready = false;
            if (ready) avail.push_back(a);
        }
        std::array<int, 2> chosen{-1, -1};
        if (avail.size() == 1) {
            chosen[0] = avail[0];
        } else if (avail.size() >= 2) {
            std::uint64_t i = rng() % avail.size();
            std::uint64_t j = rng() % (avail.size() - 1);
            if (j >= i) ++j;
            chosen = {avail[static_cast<std::size_t>(i)], avail[static_cast<std::size_t>(j)]};
        }
        // keep machine assignment sticky to limit spurious splits
        std::array<int, 2> assign{-1, -1};
        if (chosen[0] >= 0 && chosen[1] >= 0) {
            if (last[1] == chosen[0] || last[0] == chosen[1])
                assign = {chosen[1], chosen[0]};
            else
                assign = {chosen[0], chosen[1]};
        } else if (chosen[0] >= 0) {
            assign[last[1] == chosen[0] ? 1 : 0] = chosen[0];
        }
        for (int m = 0; m < 2; ++m) {
            int job = assign[static_cast<std::size_t>(m)];
            if (job < 0) continue;
            if (--rem[static_cast<std::size_t>(job)] == 0) ++finished;
            Dyadic t0 = width.scaled(slot);
            Dyadic t1 = width.scaled(slot + 1);
            auto& lane = s.machines[static_cast<std::size_t>(m)];
            if (!lane.empty() && lane.back().job == job && lane.back().end == t0)
                lane.back().end = t1;
            else
                lane.push_back({job, t0, t1});
        }
        last = assign;
    }
    if (finished < n) throw std::logic_error("random_feasible_schedule: horizon exhausted");
    return s;
}

} // namespace normsched
