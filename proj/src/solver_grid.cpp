#include <algorithm>
#include <queue>
#include <unordered_map>

#include "normsched/solver.hpp"

namespace normsched {

namespace {

using Key = unsigned __int128;

struct KeyHash {
    std::size_t operator()(Key k) const {
        auto mix = [](std::uint64_t x) {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        };
        return mix(static_cast<std::uint64_t>(k)) ^ (mix(static_cast<std::uint64_t>(k >> 64)) << 1);
    }
};

struct Node {
    long f;
    long g;
    Key key;
    bool operator>(const Node& o) const {
        if (f != o.f) return f > o.f;
        if (g != o.g) return g > o.g;
        return key > o.key;
    }
};

} // namespace

SolveResult grid_dp_solve(const Instance& instance, unsigned grid_k, GridOptions options) {
    SolveResult result;
    const int n = instance.size();
    if (n == 0) throw std::invalid_argument("grid_dp_solve: empty instance");
    if (grid_k > 16) throw std::invalid_argument("grid_dp_solve: grid exponent too large");

    std::int64_t max_release = 0;
    for (const Job& j : instance.jobs()) max_release = std::max(max_release, j.release);
    Dyadic horizon = options.horizon ? *options.horizon : Dyadic(max_release + n);

    const long unit = 1L << grid_k;  // slots per time unit
    // ceil(horizon * 2^K) in slots
    Dyadic slots_dy = horizon.scaled(unit);
    if (!slots_dy.is_integer())
        throw std::invalid_argument("grid_dp_solve: horizon must be grid-aligned");
    const long total_slots = static_cast<long>(slots_dy.numerator());
    if (total_slots <= 0 || total_slots > 2'000'000)
        throw std::invalid_argument("grid_dp_solve: horizon yields unusable slot count");

    const int rem_bits = std::max(1, 64 - __builtin_clzll(static_cast<unsigned long long>(unit)));
    if (rem_bits * n + 24 > 120) throw std::invalid_argument("grid_dp_solve: state too wide");

    std::vector<long> release_slot(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) release_slot[static_cast<std::size_t>(a)] = instance.release(a) * unit;
    std::vector<std::vector<JobId>> preds(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) preds[static_cast<std::size_t>(a)] = instance.immediate_predecessors(a);
    const std::vector<JobId> topo = instance.topological_order();

    auto pack = [&](long slot, const std::vector<int>& rem) {
        Key k = static_cast<Key>(slot);
        for (int a = 0; a < n; ++a) k = (k << rem_bits) | static_cast<unsigned>(rem[static_cast<std::size_t>(a)]);
        return k;
    };
    auto unpack = [&](Key k, long& slot, std::vector<int>& rem) {
        const Key mask = (Key(1) << rem_bits) - 1;
        for (int a = n - 1; a >= 0; --a) {
            rem[static_cast<std::size_t>(a)] = static_cast<int>(k & mask);
            k >>= rem_bits;
        }
        slot = static_cast<long>(k);
    };

    // admissible bound: every unfinished job completes no earlier than its
    // release/chain-constrained earliest slot plus its remaining work
    std::vector<long> comp_lb(static_cast<std::size_t>(n));
    auto heuristic = [&](long slot, const std::vector<int>& rem) {
        long h = 0;
        for (JobId a : topo) {
            if (rem[static_cast<std::size_t>(a)] == 0) {
                comp_lb[static_cast<std::size_t>(a)] = 0;
                continue;
            }
            long base = std::max(slot, release_slot[static_cast<std::size_t>(a)]);
            for (JobId p : preds[static_cast<std::size_t>(a)])
                if (rem[static_cast<std::size_t>(p)] > 0) base = std::max(base, comp_lb[static_cast<std::size_t>(p)]);
            comp_lb[static_cast<std::size_t>(a)] = base + rem[static_cast<std::size_t>(a)];
            h += comp_lb[static_cast<std::size_t>(a)];
        }
        return h;
    };

    std::vector<int> rem0(static_cast<std::size_t>(n), static_cast<int>(unit));
    const Key start = pack(0, rem0);
    const Key goal_rem_mask = (Key(1) << (rem_bits * n)) - 1;

    std::unordered_map<Key, long, KeyHash> best_g;
    std::unordered_map<Key, std::pair<Key, int>, KeyHash> parent;  // action packed as (a+1) | (b+1)<<8
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;

    best_g[start] = 0;
    open.push({heuristic(0, rem0), 0, start});

    std::vector<int> rem(static_cast<std::size_t>(n));
    long expanded = 0;
    std::optional<Key> goal;
    long goal_g = 0;

    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        auto it = best_g.find(node.key);
        if (it == best_g.end() || node.g != it->second) continue;  // stale entry

        long slot;
        unpack(node.key, slot, rem);
        if ((node.key & goal_rem_mask) == 0) {
            goal = node.key;
            goal_g = node.g;
            break;
        }
        if (slot >= total_slots) continue;
        if (++expanded > options.max_states) {
            result.status = SolveStatus::BudgetExceeded;
            result.stats.dp_states = expanded;
            return result;
        }

        std::vector<int> avail;
        for (int a = 0; a < n; ++a) {
            if (rem[static_cast<std::size_t>(a)] == 0) continue;
            if (release_slot[static_cast<std::size_t>(a)] > slot) continue;
            bool ready = true;
            for (JobId p : preds[static_cast<std::size_t>(a)])
                if (rem[static_cast<std::size_t>(p)] > 0) ready = false;
            if (ready) avail.push_back(a);
        }

        auto relax = [&](const std::vector<int>& next_rem, long dg, int action) {
            Key nk = pack(slot + 1, next_rem);
            long ng = node.g + dg;
            auto found = best_g.find(nk);
            if (found != best_g.end() && found->second <= ng) return;
            best_g[nk] = ng;
            parent[nk] = {node.key, action};
            open.push({ng + heuristic(slot + 1, next_rem), ng, nk});
        };

        if (avail.empty()) {
            relax(rem, 0, 0);  // wait for a release
            continue;
        }
        auto run = [&](int a, int b) {  // b < 0 for a single job
            std::vector<int> next = rem;
            long dg = 0;
            if (--next[static_cast<std::size_t>(a)] == 0) dg += slot + 1;
            if (b >= 0 && --next[static_cast<std::size_t>(b)] == 0) dg += slot + 1;
            relax(next, dg, (a + 1) | ((b + 1) << 8));
        };
        if (avail.size() == 1) {
            run(avail[0], -1);
        } else {
            for (std::size_t i = 0; i < avail.size(); ++i)
                for (std::size_t j = i + 1; j < avail.size(); ++j) run(avail[i], avail[j]);
        }
    }

    result.stats.dp_states = expanded;
    if (!goal) {
        result.status = SolveStatus::Infeasible;
        return result;
    }

    // rebuild the slot assignment along the best path
    std::vector<std::pair<int, int>> slot_jobs(static_cast<std::size_t>(total_slots + 1), {-1, -1});
    long goal_slot;
    {
        std::vector<int> tmp(static_cast<std::size_t>(n));
        unpack(*goal, goal_slot, tmp);
    }
    Key cur = *goal;
    while (cur != start) {
        auto [prev, action] = parent.at(cur);
        long cur_slot;
        unpack(cur, cur_slot, rem);
        if (action != 0) {
            int a = (action & 0xff) - 1;
            int b = ((action >> 8) & 0xff) - 1;
            slot_jobs[static_cast<std::size_t>(cur_slot - 1)] = {a, b};
        }
        cur = prev;
    }

    // pieces, keeping a job on its previous machine where possible
    IntervalSchedule schedule;
    std::array<int, 2> last_job{-1, -1};
    const Dyadic width(BigInt(1), grid_k);
    for (long s = 0; s < goal_slot; ++s) {
        auto [a, b] = slot_jobs[static_cast<std::size_t>(s)];
        std::array<int, 2> assign{-1, -1};
        if (a >= 0 && b >= 0) {
            if (last_job[1] == a || last_job[0] == b) {
                assign = {b, a};
            } else {
                assign = {a, b};
            }
        } else if (a >= 0) {
            assign[last_job[1] == a ? 1 : 0] = a;
        }
        for (int m = 0; m < 2; ++m) {
            int job = assign[static_cast<std::size_t>(m)];
            if (job < 0) continue;
            Dyadic t0 = width.scaled(s);
            Dyadic t1 = width.scaled(s + 1);
            auto& lane = schedule.machines[static_cast<std::size_t>(m)];
            if (!lane.empty() && lane.back().job == job && lane.back().end == t0)
                lane.back().end = t1;
            else
                lane.push_back({job, t0, t1});
        }
        last_job = assign;
    }

    result.status = SolveStatus::Optimal;
    result.certified = true;
    result.optimal_value = Dyadic(BigInt(goal_g), grid_k);
    result.schedule = schedule;
    result.partition = derive_partition(instance, schedule);
    return result;
}

} // namespace normsched
