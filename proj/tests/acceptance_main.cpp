// Acceptance suite: runs every criterion of the validation battery against
// the calibrated reference setup and prints one PASS/FAIL line per criterion.
// Exits nonzero if any criterion fails (or unexpectedly skips).
#include <cstdio>

#include "bilgamma/checks.hpp"

int main()
{
    using namespace bilgamma;

    const char* cfg_text =
        "alpha_plus = 1.55\n"
        "lambda_plus = 133.96\n"
        "alpha_minus = 0.94\n"
        "lambda_minus = 88.92\n"
        "r = 0\n"
        "q = 0\n"
        "s0 = 5000\n"
        "sim.n_samples = 1000000\n"
        "sim.seed = 20240811\n";
    const RunConfig cfg = parse_config_text(cfg_text);

    const auto results = run_validation(cfg);
    int failed = 0, skipped = 0;
    for (const auto& r : results) {
        const char* tag = r.status == CheckStatus::Pass   ? "PASS"
                          : r.status == CheckStatus::Fail ? "FAIL"
                                                          : "SKIP";
        if (r.status == CheckStatus::Fail)
            ++failed;
        if (r.status == CheckStatus::Skip)
            ++skipped;
        std::printf("[%2d] %-4s %-32s (%9.1f ms)\n      %s\n", r.id, tag, r.name.c_str(),
                    r.millis, r.detail.c_str());
    }
    std::printf("----\n%zu criteria: %d failed, %d skipped\n", results.size(), failed,
                skipped);
    return (failed == 0 && skipped == 0) ? 0 : 1;
}
