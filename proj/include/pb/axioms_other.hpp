#pragma once

#include "pb/axioms_fairness.hpp"
#include "pb/model.hpp"
#include "pb/rules_market.hpp"
#include "pb/satisfaction.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pb {

// Instance surgery for the dynamic axioms: cheapen one project, raise the
// budget limit, split a project into parts of the same total cost, or merge a
// bundle into one project.
struct InstanceTransform {
    enum class Kind { Discount, LimitRaise, Split, Merge };

    Kind kind = Kind::Discount;
    ProjectId project;                              // Discount / Split focus
    Rat new_cost;                                   // Discount
    Rat new_budget;                                 // LimitRaise
    std::vector<std::pair<ProjectId, Rat>> parts;   // Split replacement parts
    std::set<ProjectId> merged;                     // Merge sources
    ProjectId merged_id;                            // Merge target

    static InstanceTransform discount(ProjectId p, Rat cost);
    static InstanceTransform limit_raise(Rat budget);
    static InstanceTransform split(ProjectId p, std::vector<std::pair<ProjectId, Rat>> parts);
    static InstanceTransform merge(std::set<ProjectId> group, ProjectId id);
};

// Applies the transform. Split keeps the parts at the replaced project's
// position; approvers of the project approve every part. Merge places the
// merged project at the first member's position; approvers of any member
// approve it. Discount and LimitRaise keep ballots untouched (any kind);
// Split and Merge rewrite approval ballots only. Throws InvalidTransform on a
// violated precondition (non-lower discount, non-higher limit, limit raise
// with a project over the old limit, bad part costs, unknown or clashing ids,
// merged cost above the budget limit) and WrongProfileVariant for Split/Merge
// on non-approval profiles.
std::pair<Instance, Profile> apply_transform(const InstanceTransform& t, const Instance& in,
                                             const Profile& prof);

enum class MonotonicityKind { Discount, Limit, Splitting, Merging };

const char* monotonicity_name(MonotonicityKind k);
std::optional<MonotonicityKind> monotonicity_by_name(const std::string& name);

struct MonotonicityReport {
    VerdictStatus status = VerdictStatus::Satisfied;
    std::string detail;
    Alloc before;        // rule outcome on the original instance
    Alloc after;         // rule outcome on the transformed instance
    Instance transformed;
    Profile transformed_profile;
};

// Runs the rule on the original and transformed instances and evaluates the
// monotonicity implication for the kind: a discounted selected project stays
// selected, a raised limit only adds projects, some part of a split selected
// project survives, a merge of fully selected projects is selected. When the
// outcome on the original instance fails the kind's precondition (focus
// project or bundle not selected) the verdict is Inapplicable. The transform
// variant must match the kind (InvalidTransform otherwise). The transformed
// run re-derives a tie-break order of the same kind over the new project set
// (fresh ids rank by their own identity under lexicographic order); explicit
// lists are remapped positionally, parts at the split project's slot and a
// merge at its first member's slot.
MonotonicityReport check_monotonicity(const RuleFn& rule, MonotonicityKind kind,
                                      const Instance& in, const Profile& prof,
                                      const InstanceTransform& t, const TieBreakOrder& tb);

struct ManipulationFound {
    Ballot ballot;     // the deviating report
    Alloc truthful;    // outcome when the voter reports the truth
    Alloc manipulated; // outcome under the deviation
    std::string gain;  // truth-evaluated satisfaction before -> after
};

// Brute-force search for a profitable deviation by one voter, the voter's
// current ballot taken as the truth. Approval profiles try every approval
// ballot, ordered by ascending symmetric difference from the truth (ties
// lexicographic); cardinal profiles try single-coordinate zero/max
// substitutions and then all distinct permutations of the truthful scores in
// ascending lexicographic order. Exact mode wants a strict truth-evaluated
// gain; approximate mode wants the deviation to beat the truthful outcome
// even after any single project is added to it. Approval gains are measured
// by `sat` (MissingSatisfaction when absent); cardinal gains by score sums.
// Absence of a result certifies nothing beyond the searched space. Throws
// CapExceeded when the candidate space exceeds the caps.
std::optional<ManipulationFound> find_manipulation(const RuleFn& rule, const Instance& in,
                                                   const Profile& prof, int voter,
                                                   const std::optional<SatFn>& sat,
                                                   bool approximate, const TieBreakOrder& tb,
                                                   const EnumCaps& caps = {});

// Party-list probe on unit-cost instances: when every pair of voters has
// equal or disjoint support sets, every project supported by at least n/b
// voters must be selected. Inapplicable off unit-cost instances or
// non-party-list profiles. Cardinal or approval profiles.
Verdict check_weak_proportionality(const Instance& in, const Profile& prof, const Alloc& alloc);

} // namespace pb
