#pragma once

#include "pb/rational.hpp"

#include <utility>
#include <vector>

namespace pb {

enum class LpSense { Le, Ge, Eq };

struct LpConstraint {
    std::vector<std::pair<int, Rat>> coef; // sparse (variable, coefficient)
    LpSense sense = LpSense::Le;
    Rat rhs = 0;
};

struct LpResult {
    bool feasible = false;
    bool unbounded = false;
    Rat objective = 0;  // valid when feasible && !unbounded
    std::vector<Rat> x; // an optimal vertex, size nvars; feasible point if unbounded
};

// Exact rational two-phase simplex with Bland's rule over x >= 0.
// Small dense systems only (hundreds of variables); always terminates.
LpResult lp_min(int nvars, const std::vector<std::pair<int, Rat>>& objective,
                const std::vector<LpConstraint>& cons);
LpResult lp_max(int nvars, const std::vector<std::pair<int, Rat>>& objective,
                const std::vector<LpConstraint>& cons);

} // namespace pb
