#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dynerg {

// One acceptance check: a self-contained pass/fail verdict with measurements.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string details;
};

struct VerifyOptions {
    int threads = 1;
    std::uint64_t seed = 42;
    // Test hook: perturbs one brute-force oracle value so the mismatch path
    // (and the nonzero exit it must cause) can be exercised.
    bool inject_oracle_mismatch = false;
};

// Runs every acceptance criterion in order; never skips one silently — a
// criterion that throws is reported as a failure carrying the message.
std::vector<CriterionResult> run_acceptance_criteria(const VerifyOptions& options);

std::string format_criterion_line(const CriterionResult& result);

}  // namespace dynerg
