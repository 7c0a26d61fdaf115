#include <cstdio>
#include <cstdlib>

#include "dynerg/verify.hpp"

// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.
int main() {
    dynerg::VerifyOptions options;
    if (const char* env = std::getenv("DYNERG_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) options.threads = parsed;
    }
    const auto results = dynerg::run_acceptance_criteria(options);
    bool all_pass = true;
    for (const auto& result : results) {
        std::puts(dynerg::format_criterion_line(result).c_str());
        all_pass = all_pass && result.pass;
    }
    std::fflush(stdout);
    return all_pass ? 0 : 1;
}
