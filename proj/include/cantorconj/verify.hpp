#pragma once

#include "cantorconj/quadratic_map.hpp"
#include "cantorconj/target_cantor.hpp"

#include <string>
#include <vector>

namespace cantorconj {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the invariant suites of every module for one (c, Λ*) pair at depth
// `depth` (clamped to [1, 20]): fixed points, escape gap, model structure,
// endpoint orbits, target construction, φ, conjugacy, the bounded/escape
// dichotomy and the escape-time renderer.
std::vector<CheckResult> run_verification(double c, const CantorSpec& spec, BuildMode mode, int depth);

} // namespace cantorconj
