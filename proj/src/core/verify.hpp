#pragma once

// Named verification checks and suites. Every check is pure given the seed;
// each one covers one acceptance-style identity family and reports per-case
// rows. Suites: closed-forms, interpolation, graphs, copies, all.

#include "core/json_io.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nclp {

struct CheckResult {
    std::string name;
    bool passed = false;
    Json detail; // per-case rows and summary numbers
};

struct CheckInfo {
    std::string name;
    std::string suite;
    std::string summary;
};

const std::vector<CheckInfo>& check_catalog();

CheckResult run_check(const std::string& name, uint64_t seed);

struct SuiteResult {
    std::string suite;
    bool all_passed = false;
    std::vector<CheckResult> results; // ordered by check name
};

SuiteResult run_suite(const std::string& suite, uint64_t seed, int jobs = 1);

} // namespace nclp
