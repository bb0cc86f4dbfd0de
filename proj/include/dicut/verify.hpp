#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dicut/graph.hpp"

namespace dicut {

struct CheckResult {
    std::string id;
    std::string description;
    bool pass = false;
    bool informational = false;  // context lines, excluded from the gate
    std::string measured;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    // User-supplied scheme for the sandwich suite; the ratio floor then
    // becomes 0.483 - fj_eps instead of the shipped default's 0.45.
    std::optional<ObliviousScheme> scheme;
    double fj_eps = 0.0;
};

std::vector<CheckResult> verify_sandwich(const VerifyOptions& opts);       // criteria 1, 2
std::vector<CheckResult> verify_concentration(const VerifyOptions& opts); // criteria 3-6, 14
std::vector<CheckResult> verify_reservoir(const VerifyOptions& opts);     // criterion 7
std::vector<CheckResult> verify_hash(const VerifyOptions& opts);          // criterion 8
std::vector<CheckResult> verify_rmd(const VerifyOptions& opts);           // criteria 9-11
std::vector<CheckResult> verify_hypergraph(const VerifyOptions& opts);    // criteria 12, 13

std::vector<CheckResult> verify_suite(const std::string& suite, const VerifyOptions& opts);
std::vector<CheckResult> verify_all(const VerifyOptions& opts);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace dicut
