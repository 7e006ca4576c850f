#ifndef NORMSCHED_BENCH_HPP
#define NORMSCHED_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "normsched/analysis.hpp"
#include "normsched/instances.hpp"

namespace normsched::bench {

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    std::string detail;
    long millis;
};

/// Runs every acceptance criterion; results come back in criterion order.
std::vector<CriterionResult> run_all(int threads = 1);

std::string results_to_json(const std::vector<CriterionResult>& results);
std::string results_to_text(const std::vector<CriterionResult>& results);

/// A synthetic abnormal-block instance carrying an alternating chain of the
/// requested length, randomized per seed; exercises epsilon-pushing.
struct ChainCase {
    Instance instance;
    BlockPartition partition;
    AlternatingChain chain;
    JobId x;
    JobId y;
};

ChainCase make_chain_case(int length, std::uint64_t seed);

} // namespace normsched::bench

#endif
