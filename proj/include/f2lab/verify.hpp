#pragma once

#include <string>
#include <vector>

#include "f2lab/exec.hpp"

namespace f2lab {

struct CheckResult {
    int criterion = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Run one acceptance criterion (1..11).
CheckResult run_criterion(int n, const ExecPolicy& policy = serial_policy());

// All eleven criteria in order.
std::vector<CheckResult> run_acceptance(const ExecPolicy& policy = serial_policy());

// Named batteries: gaps -> {1,2}, lemmas -> {4}, chebyshev -> {5},
// regularize -> {6,8}, sunflower -> {7,10}, all -> everything.
std::vector<CheckResult> run_suite(const std::string& name,
                                   const ExecPolicy& policy = serial_policy());

}  // namespace f2lab
