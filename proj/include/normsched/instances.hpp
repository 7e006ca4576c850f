#ifndef NORMSCHED_INSTANCES_HPP
#define NORMSCHED_INSTANCES_HPP

#include <cstdint>

#include "normsched/schedule.hpp"

namespace normsched {

/// The lower-bound family: levels 0..p of four jobs each. Level i holds
/// a_1..a_3 released at 2i feeding a_4 released at 2i+1; the a_4 jobs chain
/// upward. Job a_j^i gets id 4i + j - 1.
Instance make_jp(int p);

/// The explicit schedule completing a_4^p at 2p+3 - 1/2^{p+1}: level 0 is a
/// wrap-around fill of [0, 3/2] plus a_4^0 on [3/2, 5/2]; each later level
/// splits a_2 once around the shrinking idle gap.
IntervalSchedule make_pp_schedule(int p);

/// J_p plus a pivot job `a` and a chain b_1..b_l hanging below a_4^p and a.
/// chain_length defaults to C(a_4^p) * 2^(2|J_p|+3) and must then not exceed
/// the cap; larger p require an explicit override.
Instance make_theorem_instance(int p, std::optional<long> chain_length = std::nullopt);

/// The schedule accompanying the theorem instance: P_p with `a` filling the
/// per-level idle gaps (ending at 2(p+1) + 1/2^{p+1}) and the chain running
/// consecutively after a_4^p.
IntervalSchedule make_theorem_companion_schedule(int p, std::optional<long> chain_length = std::nullopt);

long theorem_default_chain_length(int p);
constexpr long kTheoremChainCap = 10'000'000;

/// Random in-forest: each job's successor is drawn uniformly from the
/// higher-numbered jobs or none; releases uniform in [0, max_release].
Instance random_intree(int n, std::int64_t max_release, std::uint64_t seed);

/// Randomized maximal list scheduling on the 2^-K grid; feasible by
/// construction and deterministic per seed.
IntervalSchedule random_feasible_schedule(const Instance& instance, unsigned grid_k, std::uint64_t seed);

} // namespace normsched

#endif
