#pragma once

#include "pwadv/params.hpp"

#include <string>
#include <vector>

namespace pwadv {

enum class CheckKind {
    Exact,    // actual == expected
    Absolute, // |actual - expected| <= tolerance
    Relative, // |actual - expected| <= tolerance * |expected|
    AtLeast,  // actual >= expected
    Holds,    // boolean property; actual is 1 when it holds
};

struct Check {
    std::string id;
    std::string name;
    std::string citation;
    CheckKind kind = CheckKind::Exact;
    double expected = 0;
    double actual = 0;
    double tolerance = 0;
    bool passed = false;
};

Check make_check(std::string id, std::string name, std::string citation, CheckKind kind, double expected,
                 double actual, double tolerance = 0);

/// Grids used by the published results.
ModelGrid ladder_grid();    // 512 x 512 x 64
ModelGrid breakdown_grid(); // 1012 x 1024 x 64
ModelGrid large_grid();     // 268.3 million cells, auto-factored

/// The two published kernel timings used to fit the memory model: the tuned
/// single kernel on the ladder grid, and twelve kernels on the large grid at
/// the published kernel-only rate.
std::vector<Observation> published_anchors(const ModelParams& params);

/// Runs every published-number check against the given parameters.
std::vector<Check> run_validation(const ModelParams& params);

} // namespace pwadv
