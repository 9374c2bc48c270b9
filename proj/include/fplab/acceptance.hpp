#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fplab {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0;
    std::vector<std::pair<std::string, double>> metrics;  // measured values and their pinned limits
    std::vector<std::string> notes;
    std::string error;  // exception text when the criterion could not be evaluated
};

constexpr int kCriteriaCount = 12;

// Runs the selected criteria (empty = all) in order; progress and one PASS/FAIL
// line per criterion go to `log` when given. Criterion 12 reuses what 2-4 computed.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& which = {}, std::ostream* log = nullptr);

std::string summary_line(const CriterionResult& r);

} // namespace fplab
