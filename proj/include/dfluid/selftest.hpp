#pragma once

#include <string>
#include <vector>

namespace dfluid {

struct SelfTestResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelfTestReport {
    std::vector<SelfTestResult> results;
    bool all_passed() const {
        for (const auto& r : results)
            if (!r.passed) return false;
        return true;
    }
};

// Built-in oracle suite on tiny meshes. `filter` selects suites by substring;
// an empty match set is an error (invalid_argument).
SelfTestReport selftest(const std::string& filter = "");

std::vector<std::string> selftest_suite_names();

}  // namespace dfluid
