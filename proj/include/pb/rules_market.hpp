#pragma once

#include "pb/model.hpp"
#include "pb/rules_welfare.hpp"
#include "pb/satisfaction.hpp"

#include <functional>
#include <map>
#include <optional>
#include <utility>

namespace pb {

// Virtual-money loads accumulated by sequential Phragmen. After every round
// the loads sum exactly to the cost of the selected projects.
struct VoterLoads {
    std::vector<Rat> load; // per voter
    struct Round {
        int project;
        std::vector<std::pair<int, Rat>> increments; // (voter, load delta)
    };
    std::vector<Round> history;
};

// Per-voter project contributions: sum over voters equals the project cost
// for every covered project; voters only carry approved projects.
struct LoadDistribution {
    std::vector<int> projects;         // covered projects
    std::vector<std::vector<Rat>> ell; // [voter][index into projects]
};

// Entitlement alpha plus contributions gamma_i(p); structurally C1-C4:
// contributions only to approved selected projects, per-voter total <= alpha,
// selected projects exactly funded.
struct PriceSystem {
    Rat alpha;
    std::vector<std::map<int, Rat>> gamma; // per voter: project -> payment
};

struct MarketOptions {
    // Literal stop rule: halt when ANY member of the argmin tie set would
    // overflow the budget. false = only test the tiebreak-chosen member.
    bool stop_on_any_tied_overflow = true;
};

// Discrete sequential Phragmen: per round selects the supported project
// minimizing (c(p) + current supporter loads) / |supporters|, sets every
// supporter's load to that value; stops when the minimizer would overflow
// the budget or nothing is supported.
std::pair<Alloc, VoterLoads> seq_phragmen(const Instance& in, const Profile& prof,
                                          const TieBreakOrder& tb,
                                          const MarketOptions& opt = {});

// Minimizes the maximum voter load over all ways to spread each project's
// cost across its approvers (exact LP). Throws Error("UnsupportedProject")
// when a project has no approver.
std::pair<LoadDistribution, Rat> optimal_load_distribution(const Instance& in,
                                                           const Profile& prof,
                                                           const std::vector<int>& projects);

// Per round adds the project minimizing the optimal max-load of the extended
// set; stopping mirrors seq_phragmen.
std::pair<Alloc, LoadDistribution> maximin_support(const Instance& in, const Profile& prof,
                                                   const TieBreakOrder& tb,
                                                   const MarketOptions& opt = {});

struct MesResult {
    Alloc alloc;
    PriceSystem prices;
};

// Method of equal shares. Everyone starts with b/n; per round the project
// with the smallest affordability factor rho (solving
// sum_i min(remaining_i, rho * u_i(p)) = c(p) over supporters) is bought,
// supporters paying min(remaining_i, rho * u_i(p)). Cardinal profiles use
// ballot scores as u_i; approval profiles use u_i = s({p}) for the given
// satisfaction function (log satisfaction is rejected: cross-project rho
// comparisons would need transcendental arithmetic).
MesResult mes(const Instance& in, const Profile& prof, const std::optional<SatFn>& sat,
              const TieBreakOrder& tb);

enum class CompletionMethod { GreedyCompletion, BudgetVariation, Perturbation };

struct CompletionSpec {
    CompletionMethod method = CompletionMethod::GreedyCompletion;
    GreedyKey key = GreedyKey::ScorePerCost; // greedy_completion ordering key
    std::optional<Rat> step;                 // budget_variation; default b/n
    std::optional<Rat> epsilon;              // perturbation; default derived
};

using RuleFn = std::function<Alloc(const Instance&, const Profile&, const TieBreakOrder&)>;

// greedy_completion: runs the rule, then greedily fills the leftover budget
// from the unselected projects (approval scores; cardinal profiles count
// positive scores as approval). budget_variation: re-runs the rule at
// b, b+step, b+2*step, ... and returns the last outcome feasible at the
// original b, stopping at the first exhaustive or infeasible outcome.
// perturbation: cardinal profiles only; replaces zero scores with epsilon
// (default: min positive score / (2*m*n)) and reruns the rule.
Alloc complete(const RuleFn& rule, const CompletionSpec& spec, const Instance& in,
               const Profile& prof, const TieBreakOrder& tb);

} // namespace pb
