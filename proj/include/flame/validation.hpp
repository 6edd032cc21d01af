#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flame {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

enum class SuiteMode { quick, full };

// Criteria run by each mode; quick skips the long growth-rate runs.
std::vector<int> suite_criteria(SuiteMode mode);

CriterionResult run_criterion(int id);

// Runs the criteria in order, printing one line per criterion to out if given.
std::vector<CriterionResult> run_suite(SuiteMode mode, std::ostream* out = nullptr);

std::string format_result(const CriterionResult& r);

}  // namespace flame
