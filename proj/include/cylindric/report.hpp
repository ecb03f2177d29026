/*
 * Copyright 2026 The cylindric Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cylindric/common.hpp>

#include <map>
#include <sstream>

namespace cylindric {

/// Outcome of one named condition. Witness keys are indices such as "i", "atom".
struct Check {
    std::string name;
    bool passed = true;
    std::string reduction;
    std::map<std::string, long long> witness;
    std::string detail;
};

struct Report {
    std::string subject;
    std::vector<Check> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }

    const Check& at(const std::string& name) const {
        for (auto& c : checks)
            if (c.name == name) return c;
        throw InvalidArgument("report has no check named " + name);
    }

    std::string to_text() const {
        std::ostringstream os;
        if (!subject.empty()) os << subject << "\n";
        for (auto& c : checks) {
            os << "  " << c.name << ": " << (c.passed ? "pass" : "FAIL");
            if (!c.reduction.empty()) os << "  [" << c.reduction << "]";
            if (!c.passed) {
                os << "  witness:";
                for (auto& [k, v] : c.witness) os << " " << k << "=" << v;
                if (!c.detail.empty()) os << " (" << c.detail << ")";
            }
            os << "\n";
        }
        return os.str();
    }
};

}  // namespace cylindric
