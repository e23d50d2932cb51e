#pragma once

#include "nfcrb/oracle.hpp"

#include <cstdint>
#include <ostream>
#include <vector>

namespace nfcrb {

struct VerifyOptions {
    std::uint64_t seed = 1;
    int battery = 20;  ///< randomized scenes per battery
    int workers = 1;
    int mc_draws = 10000;
    /// Test hook: perturb the analytic location derivatives so the FIM
    /// oracle check must fail.
    bool inject_fault = false;
};

struct VerifyResult {
    std::vector<OracleReport> reports;
    bool all_pass = true;
};

/// Runs the steering-derivative, FIM, gain, Monte Carlo and invariant batteries.
VerifyResult run_verify(const VerifyOptions& options);

void write_verify_report(const VerifyOptions& options, const VerifyResult& result,
                         std::ostream& out);

} // namespace nfcrb
