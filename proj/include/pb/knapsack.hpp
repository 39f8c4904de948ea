#pragma once

#include "pb/model.hpp"
#include "pb/rational.hpp"

#include <vector>

namespace pb {

struct KnapsackCaps {
    // Rescaled integer budget bound for the dynamic program.
    long long max_scaled_budget = 10'000'000;
};

struct KnapsackResult {
    std::vector<int> chosen; // sorted by item index
    Rat value;
};

// Exact 0/1 knapsack: maximize sum of values over subsets with total cost at
// most `budget`. Costs must be positive, values nonnegative, all rational.
// Rationals are rescaled to integers by LCM of denominators; if the rescaled
// budget exceeds caps.max_scaled_budget (or values overflow 62-bit sums) the
// call throws Error("ScaleOverflow") and the caller falls back to subset
// search.
//
// Tie-breaking: among optimal subsets, returns the minimal one under
// prefix order on sorted `rank` sequences (rank = position in `pref`, a
// permutation of item indices; pass empty for identity), then augmented with
// every zero-value item that still fits, scanned in `pref` order; that is the
// minimal member of the inclusion-maximal optima.
KnapsackResult knapsack_max(const std::vector<Rat>& costs, const std::vector<Rat>& values,
                            const Rat& budget, const std::vector<int>& pref = {},
                            const KnapsackCaps& caps = {});

// Value-only variant (no reconstruction, no augmentation).
Rat knapsack_max_value(const std::vector<Rat>& costs, const std::vector<Rat>& values,
                       const Rat& budget, const KnapsackCaps& caps = {});

} // namespace pb
