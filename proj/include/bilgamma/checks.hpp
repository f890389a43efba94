#ifndef BILGAMMA_CHECKS_HPP
#define BILGAMMA_CHECKS_HPP

#include <string>
#include <vector>

#include "bilgamma/config.hpp"

namespace bilgamma {

enum class CheckStatus { Pass, Fail, Skip };

struct CheckResult {
    int id;                // stable check number (1..14)
    std::string name;
    CheckStatus status;
    std::string detail;    // measurement summary or skip reason
    double millis;
};

/// Runs the full validation battery against a configuration. Checks whose
/// preconditions the configuration cannot satisfy are reported as skipped
/// with a reason. Reference-value comparisons are only armed when the
/// configuration matches the calibrated reference parameter set
/// (1.55, 133.96; 0.94, 88.92), s0 = 5000, r = q = 0.
std::vector<CheckResult> run_validation(const RunConfig& cfg);

/// True when every non-skipped check passed.
bool all_passed(const std::vector<CheckResult>& results);

} // namespace bilgamma

#endif
