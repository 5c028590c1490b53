#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invsub/model.hpp"

namespace invsub {

struct CheckResult {
    std::string check;
    std::string module;
    bool pass = false;
    double observed = 0.0;   // the measured error/extremum the check bounds
    double tolerance = 0.0;
};

struct VerifyOptions {
    long mc_paths = 20000;
    std::uint64_t seed = 20240901;
    double delta = 1e-3;
    bool parallel = true;
};

// Run the invariant suites applicable to the model: exponent properties,
// inversion transform pairs, renewal identities, moment consistency, joint
// transform PDE/boundary checks, and Monte Carlo agreement.
std::vector<CheckResult> run_verify(const SubordinatorModel& m, const VerifyOptions& opt = {});

std::string verify_report_json(const std::vector<CheckResult>& results);
std::string verify_report_csv(const std::vector<CheckResult>& results);

}  // namespace invsub
