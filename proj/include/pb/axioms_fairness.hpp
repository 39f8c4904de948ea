#pragma once

#include "pb/model.hpp"
#include "pb/rules_market.hpp"
#include "pb/satisfaction.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pb {

// Brute-force definitional checkers. Every checker enumerates candidate
// coalitions literally (within caps) and returns the first violating witness
// under a fixed deterministic order: bundles in lexicographic list order,
// groups by size then lexicographic. Found witnesses are re-validated through
// verify_* (a straight-line reevaluation that shares no code with the
// enumeration fast paths) before being returned.

enum class JrAxiom {
    StrongEjr,
    Ejr,
    Ejr1,
    EjrX,
    Pjr,
    Pjr1,
    PjrX,
    LocalBpjrL,
    StrongBpjrL,
    Fjr,
};

// Stable ids: strong-ejr, ejr, ejr1, ejrx, pjr, pjr1, pjrx, local-bpjr-l,
// strong-bpjr-l, fjr.
const char* jr_axiom_name(JrAxiom a);
std::optional<JrAxiom> jr_axiom_by_name(const std::string& name);

struct EnumCaps {
    int max_n = 12;
    int max_m = 12;
};

struct CohesiveWitness {
    std::vector<int> group;  // voter indices, ascending
    std::vector<int> bundle; // project indices, ascending
    // Cardinal axioms: pointwise min of the group's scores on the bundle.
    std::map<int, Rat> alpha;
    // FJR: the min over members of their total score on the bundle.
    std::optional<Rat> beta;
    // Strong-BPJR-L / cumulative proportionality: the budget level the group
    // controls but does not receive.
    std::optional<Rat> level;
    // CPSC: the sub-bundle whose cost fits the group's share.
    std::vector<int> sub_bundle;
    // -1/-X style witnesses and IPSC: the extra project of the failed clause.
    std::optional<int> extra;
};

enum class VerdictStatus { Satisfied, Violated, Inapplicable };

struct Verdict {
    VerdictStatus status = VerdictStatus::Satisfied;
    std::string axiom;
    std::string detail; // parameters, or the reason when inapplicable
    std::optional<CohesiveWitness> witness;

    bool ok() const { return status == VerdictStatus::Satisfied; }
};

// Justified-representation family. Cardinal profiles use the score-sum forms
// (sat ignored); approval profiles evaluate the bracketed [sat] forms and
// require sat, except StrongBpjrL whose level condition is cost-based.
// relative_budget replaces the budget limit with c(allocation) inside the
// cohesiveness bound. Throws CapExceeded, MissingSatisfaction,
// WrongProfileVariant.
Verdict check_jr(const Instance& in, const Profile& prof, const Alloc& alloc, JrAxiom axiom,
                 const std::optional<SatFn>& sat = {}, bool relative_budget = false,
                 const EnumCaps& caps = {});

enum class CoreMode { Exact, SatApprox, EntitlementApprox };

// Core membership. Exact: no coalition with |N|/n >= c(P)/b where every
// member strictly prefers P. SatApprox(alpha): deviations only count when no
// member reaches a 1/alpha fraction of the deviation satisfaction even with
// one extra project. EntitlementApprox(alpha): the share bound tightens to
// |N|/n >= alpha*c(P)/b. Cardinal profiles compare score sums; approval
// profiles need sat. Throws CapExceeded, MissingSatisfaction,
// WrongProfileVariant, BadAlpha; SatApprox with a log-scale sat throws
// UnsupportedSatisfactionAlgebra.
Verdict check_core(const Instance& in, const Profile& prof, const Alloc& alloc,
                   CoreMode mode = CoreMode::Exact, const Rat& alpha = 1,
                   const std::optional<SatFn>& sat = {}, const EnumCaps& caps = {});

// Max over improving deviations (N, P) (every member strictly better off) of
// |N|*b / (n*c(P)); 0 when none exists. The allocation is in the
// alpha-entitlement approximate core exactly for alpha strictly above the
// returned threshold.
Rat audit_core_entitlement(const Instance& in, const Profile& prof, const Alloc& alloc,
                           const std::optional<SatFn>& sat = {}, const EnumCaps& caps = {});

enum class PriceStrength { None, AlphaGtB, C6AndAlphaGtB };

struct PriceVerdict {
    bool priceable = false;
    std::optional<PriceSystem> system; // witness when priceable
    std::string detail;
};

// Exact linear feasibility for a price system: voters contribute only to
// selected projects they support (C1, C2), within a per-voter entitlement
// (C3), selected projects are exactly funded (C4), and supporters of an
// unselected project cannot jointly afford it with their leftover (C5).
// AlphaGtB additionally requires an entitlement strictly above the budget
// limit (decided by maximizing the entitlement); C6AndAlphaGtB adds the
// no-joint-move condition (C6). Cardinal or approval profiles.
PriceVerdict check_priceable(const Instance& in, const Profile& prof, const Alloc& alloc,
                             PriceStrength strength = PriceStrength::None);

// Literal C1-C5 (+ C6 / entitlement bound per strength) validation of a
// concrete price system. On failure *why names the first violated condition.
bool validate_price_system(const Instance& in, const Profile& prof, const Alloc& alloc,
                           const PriceSystem& ps, PriceStrength strength = PriceStrength::None,
                           std::string* why = nullptr);

// Every voter receives at least min(b/n, share of everything they approve),
// where a project's cost is split equally among its supporters.
Verdict check_fair_share(const Instance& in, const Profile& prof, const Alloc& alloc);

enum class PscVariant { Cpsc, Ipsc };

// Proportionality for solid coalitions. Ordinal (strict or weak) profiles
// check the comparative / inclusion conditions literally; approval profiles
// use the approval restatements (CPSC = PJR[cost] + maximal cost; IPSC =
// per-group cost condition + exhaustiveness). Unranked projects count as one
// shared bottom indifference class. Throws CapExceeded, WrongProfileVariant.
Verdict check_psc(const Instance& in, const Profile& prof, const Alloc& alloc, PscVariant variant,
                  const EnumCaps& caps = {});

// Proportional representation for cumulative ballots: a group controlling l
// budget units whose members all weight every project of a bundle of cost
// <= l positively, while outsiders put no weight outside the bundle, must see
// the whole bundle selected. Requires a positive integer budget
// (NonIntegerBudget). Throws CapExceeded, WrongProfileVariant.
Verdict check_cumulative_pr(const Instance& in, const Profile& prof, const Alloc& alloc,
                            const EnumCaps& caps = {});

// Straight-line reevaluation of the definitional condition at one specific
// witness; used by the checkers before returning and by the test oracles.
bool verify_jr_witness(const Instance& in, const Profile& prof, const Alloc& alloc, JrAxiom axiom,
                       const std::optional<SatFn>& sat, bool relative_budget,
                       const CohesiveWitness& w);
bool verify_core_witness(const Instance& in, const Profile& prof, const Alloc& alloc, CoreMode mode,
                         const Rat& alpha, const std::optional<SatFn>& sat,
                         const CohesiveWitness& w);

} // namespace pb
