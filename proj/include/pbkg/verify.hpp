#ifndef PBKG_VERIFY_HPP
#define PBKG_VERIFY_HPP

#include <string>
#include <vector>

#include "pbkg/config.hpp"

namespace pbkg {

struct CheckResult {
    std::string name;
    bool pass = false;
    bool informational = false; // reported, never counted as failure
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;
};

/// Runs the cross-module identity suites: exact ladder algebra, deformed-pair
/// identities, lattice field consistency, the Bessel-identity corpus, the
/// divergence-slope law, and the smearing equivalences.  Deterministic for a
/// fixed config (probe states are drawn from config.seed).
std::vector<CheckResult> run_verify_suite(const RunConfig& config);

/// One line per check plus a summary; byte-stable for a fixed config.
std::string render_verify_report(const std::vector<CheckResult>& results);

/// True when every non-informational check passed.
bool all_passed(const std::vector<CheckResult>& results);

} // namespace pbkg

#endif
