// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Optional arguments select criteria by number: fplab_acceptance 1 2 11
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "fplab/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        try {
            which.push_back(std::stoi(argv[i]));
        } catch (const std::exception&) {
            std::cerr << "usage: fplab_acceptance [criterion ...]\n";
            return 2;
        }
    }
    std::vector<fplab::CriterionResult> results;
    try {
        results = fplab::run_acceptance(which, &std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "acceptance: " << e.what() << '\n';
        return 2;
    }
    int failed = 0;
    std::cout << "\n== acceptance summary ==\n";
    for (const auto& r : results) {
        std::cout << fplab::summary_line(r) << '\n';
        failed += !r.pass;
    }
    std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
    return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
