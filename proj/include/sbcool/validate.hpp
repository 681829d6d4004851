#pragma once

// Cross-module consistency battery: the closed forms against the
// distribution oracle, the balance identity, rate symmetries, and the
// spectrum parity rules. Run on demand from the CLI; the test suite runs
// the same checks at tighter settings.

#include <optional>
#include <string>
#include <vector>

#include "sbcool/core_model.hpp"

namespace sbcool {

struct ValidationCheck {
    std::string name;
    bool passed = false;
    bool skipped = false;
    std::string detail;  // measured value vs tolerance, or skip reason
};

// params: battery anchor point; when absent a built-in reference set is
// used. All randomness is internally seeded, so the battery is
// deterministic.
std::vector<ValidationCheck> run_validation(const std::optional<PhysicalParams>& params);

bool all_passed(const std::vector<ValidationCheck>& checks);

}  // namespace sbcool
