// Runs the full verification suite and prints one pass/fail line per check.
// Exit status is nonzero if any check fails.

#include <cstdlib>
#include <iostream>

#include "rdtoda/verify.hpp"

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 0;
    bool all_pass = true;
    for (const auto& r : rdtoda::run_suite("all", seed)) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "PASS" : "FAIL") << " [" << r.index << "] " << r.name << ": "
                  << r.detail << "\n";
    }
    std::cout << (all_pass ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
    return all_pass ? 0 : 1;
}
