#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsi {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The acceptance suite: one entry per criterion, each pinned to its stated
/// tolerance, run on the canonical configuration (L = 2, nu = 0.1,
/// alpha = 1, beta = 0, gamma = 0.5, 48x24, 48 beam nodes, T = 1, Nt = 64).
/// Writes one pass/fail line per criterion to `out`.
std::vector<CheckResult> run_acceptance_suite(std::ostream& out, unsigned seed = 777);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace fsi
