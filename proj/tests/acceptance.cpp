// Acceptance suite: runs every criterion at its stated tolerance on the
// canonical configuration and prints one pass/fail line per criterion.
#include <cstdio>
#include <iostream>

#include "fsi/verify.hpp"

int main()
{
    std::cout << "acceptance suite, canonical configuration "
                 "(L=2, nu=0.1, alpha=1, beta=0, gamma=0.5, 48x24, T=1, Nt=64)\n";
    auto results = fsi::run_acceptance_suite(std::cout);
    int failed = 0;
    for (const auto& r : results)
        failed += r.pass ? 0 : 1;
    std::cout << (failed == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED: " + std::to_string(failed)) << "\n";
    return failed == 0 ? 0 : 1;
}
