#pragma once

#include "pb/knapsack.hpp"
#include "pb/model.hpp"
#include "pb/satisfaction.hpp"
#include "pb/satvalue.hpp"

#include <optional>

namespace pb {

enum class WelfareKind { Util, CC, Egal, Nash };

// Util over a cardinal profile sums ballot scores directly (additive voter
// satisfaction); over an approval profile a satisfaction function is
// required. CC uses ballot scores (max over selected); Egal/Nash aggregate
// the same per-voter satisfactions as Util.
struct WelfareObjective {
    WelfareKind kind = WelfareKind::Util;
    std::optional<SatFn> sat;

    static WelfareObjective util() { return {WelfareKind::Util, std::nullopt}; }
    static WelfareObjective util_sat(SatFn s) { return {WelfareKind::Util, std::move(s)}; }
    static WelfareObjective cc() { return {WelfareKind::CC, std::nullopt}; }
    static WelfareObjective egal(std::optional<SatFn> s = std::nullopt) {
        return {WelfareKind::Egal, std::move(s)};
    }
    static WelfareObjective nash(std::optional<SatFn> s = std::nullopt) {
        return {WelfareKind::Nash, std::move(s)};
    }
};

// Per-voter satisfaction with an allocation: cardinal profiles sum scores
// over selected projects; approval profiles evaluate `sat` on the approved
// selected set. Throws Error("IncompatibleProfile") for other profile kinds
// or a missing satisfaction function.
SatValue voter_satisfaction(const Instance& in, const Profile& prof, int voter, const Alloc& a,
                            const std::optional<SatFn>& sat);

// Util = sum, CC = sum of per-voter max selected scores, Egal = min,
// Nash = plain product (0 when any voter has zero satisfaction; degeneracy
// handling lives in maximize_welfare only).
SatValue welfare_value(const Instance& in, const Profile& prof, const Alloc& a,
                       const WelfareObjective& obj);

struct MaxWelfareCaps {
    KnapsackCaps knapsack;
    int max_subset_m = 24; // subset-search path bound
};

// Exact maximizer. Additive Util goes through the knapsack dynamic program
// (per-project value = sum of ballot scores, or approval score times the
// satisfaction singleton); everything else searches subsets with feasibility
// pruning. Ties: the prefix-order minimal inclusion-maximal optimal set
// under `tb`. Throws Error("CapExceeded") when the subset path exceeds
// caps.max_subset_m, Error("ScaleOverflow") from the knapsack rescale.
Alloc maximize_welfare(const Instance& in, const Profile& prof, const WelfareObjective& obj,
                       const TieBreakOrder& tb, const MaxWelfareCaps& caps = {});

// Number of approving voters. Throws Error("WrongProfileVariant") on
// non-approval profiles.
int approval_score(const Profile& prof, int p);

// Scans the whole order, adding every project that still fits; skipping an
// unaffordable project does not stop the scan.
Alloc greedy_scheme(const Instance& in, const std::vector<int>& order);

enum class GreedyKey { ScorePerCost, Score };

// Orders projects by descending key (approval score over cost, or approval
// score), equal keys broken by `tb`, then runs greedy_scheme.
Alloc greedy_welfare(const Instance& in, const Profile& prof, GreedyKey key,
                     const TieBreakOrder& tb);

} // namespace pb
