#pragma once

// End-to-end acceptance checks. Each criterion runs the full pipeline on
// catalog fields and compares against closed-form or independently
// computed values.

#include <string>
#include <vector>

namespace combing {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::vector<std::string> details;  ///< one line per individual check
    double seconds = 0.0;
};

enum class Suite { Paper, Oracles, Quick, All };

Suite parse_suite(const std::string& name);
std::vector<int> suite_criteria(Suite suite);

/// Throws std::out_of_range for ids outside 1..9. Numerical failures are
/// caught and reported as failed checks.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_suite(Suite suite);

}  // namespace combing
