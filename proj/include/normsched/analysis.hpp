#ifndef NORMSCHED_ANALYSIS_HPP
#define NORMSCHED_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "normsched/schedule.hpp"

namespace normsched {

/// True iff x * 2^l is an integer.
bool is_l_normal(const Dyadic& x, unsigned l);

/// Minimum block index i (1-based) whose block is not i-normal: block length
/// must be i-normal and every amount (i+1)-normal. nullopt means normal.
std::optional<int> abnormality_point(const BlockPartition& partition);

struct ShiftReport {
    std::vector<Dyadic> points;  // all piece boundaries, sorted
    std::vector<Dyadic> shifts;  // consecutive differences
    std::optional<Dyadic> resolution;  // minimum shift, absent if < 2 points
};

ShiftReport shifts_and_resolution(const IntervalSchedule& schedule);

/// Maximal execution runs minus one. Abutting cross-machine pieces are one
/// run: a migration interrupts nothing.
int count_preemptions(const IntervalSchedule& schedule, JobId job);

enum class DiagnosisKind {
    NonSpanningCompletion,
    TooManyJobsInBlock,
    IdleTimeViolation,
    Interlace,
    CcdConfiguration,
    BetweenPreemptions,
    AbnormalBlock,
};

std::string to_string(DiagnosisKind kind);

struct Diagnosis {
    DiagnosisKind kind;
    std::optional<int> block;
    std::vector<JobId> jobs;
    std::string witness;
};

struct InterlaceWitness {
    JobId a;
    JobId b;
    int t;  // 1-based block index
};

struct AConfiguration {
    JobId a;
    JobId b;
    Dyadic at_event;        // e_j = completion of a
    Dyadic length;          // maximal non-preemptive tail of a
    Dyadic b_completes_at;  // e_j'
};

struct AlternatingChain {
    std::vector<JobId> jobs;   // d_1..d_l
    Dyadic anchor_event;       // e_{i+1}
    int abnormality_point;     // 1-based block index i
};

/// Lexicographically first interlacing pair (tau(a), t, a, b), if any.
std::optional<InterlaceWitness> find_interlace(const Instance& instance, const BlockPartition& partition);

/// All A-configurations of the canonical realization, maximal length each.
std::vector<AConfiguration> find_a_configurations(const Instance& instance, const BlockPartition& partition);

/// Maximal alternating chains rooted at each abnormal job that runs
/// non-preemptively from e_{i+1}. Empty when the partition is normal.
std::vector<AlternatingChain> find_alternating_chains(const Instance& instance, const BlockPartition& partition);

struct LintOptions {
    /// Abnormality is advisory (non-normal optima exist); off by default so
    /// an empty lint is exactly the necessary optimality conditions.
    bool include_abnormal = false;
};

/// Violated necessary-conditions-for-optimality. Empty output is necessary,
/// never sufficient, for optimality.
std::vector<Diagnosis> lint(const Instance& instance, const BlockPartition& partition, LintOptions options = {});

std::string diagnoses_to_json(const std::vector<Diagnosis>& diagnoses);

} // namespace normsched

#endif
