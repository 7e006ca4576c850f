// Acceptance suite: runs every criterion and prints one PASS/FAIL line each.
#include <cstdlib>
#include <iostream>

#include "normsched/bench.hpp"

int main() {
    int threads = 1;
    if (const char* raw = std::getenv("NORMSCHED_THREADS")) {
        int value = std::atoi(raw);
        if (value > 0) threads = value;
    }
    auto results = normsched::bench::run_all(threads);
    std::cout << normsched::bench::results_to_text(results);
    bool all_pass = true;
    for (const auto& r : results) all_pass &= r.pass;
    std::cout << (all_pass ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED") << "\n";
    return all_pass ? 0 : 1;
}
