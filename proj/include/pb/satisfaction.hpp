#pragma once

#include "pb/knapsack.hpp"
#include "pb/model.hpp"
#include "pb/satvalue.hpp"

#include <map>
#include <string>
#include <vector>

namespace pb {

enum class SatKind { Card, Cost, CC, Share, Log, Sqrt, Additive };

// Inclusion-monotone evaluator of approved-and-selected project sets; zero
// exactly on the empty set. Share carries a supporter-count snapshot of the
// profile it was bound to.
class SatFn {
public:
    static SatFn card() { return SatFn(SatKind::Card); }
    static SatFn cost() { return SatFn(SatKind::Cost); }
    static SatFn cc() { return SatFn(SatKind::CC); }
    static SatFn log_fn() { return SatFn(SatKind::Log); }
    static SatFn sqrt_fn() { return SatFn(SatKind::Sqrt); }
    static SatFn additive(const Instance& in, const std::map<ProjectId, Rat>& values);
    // Requires an approval profile (supporter counts); throws MissingContext.
    static SatFn share(const Instance& in, const Profile& prof);
    // CLI names: card, cost, cc, share, log, sqrt. `prof` is only needed for
    // share. Throws Error("UnknownSatisfaction").
    static SatFn by_name(const std::string& name, const Instance& in, const Profile* prof);

    SatKind kind() const { return kind_; }
    const char* name() const;
    // value(P) = sum over p of value({p})
    bool additive_over_projects() const;
    // P' strictly inside P implies value(P') < value(P)
    bool strictly_increasing() const;

    SatValue of_set(const Instance& in, const std::vector<int>& P) const;
    SatValue singleton(const Instance& in, int p) const;

private:
    explicit SatFn(SatKind k) : kind_(k) {}
    SatKind kind_;
    std::vector<Rat> additive_;   // per project index (Additive)
    std::vector<int> supporters_; // per project index (Share)
};

// sat(pi ∩ A_i) for an approval ballot.
SatValue evaluate(const SatFn& fn, const ApprovalBallot& ballot, const Alloc& alloc,
                  const Instance& in);

// evaluate(fn, ballot, alloc) divided by the maximum satisfaction the voter
// could get from any feasible subset of their approved projects. Defined for
// linear-scale functions (card, cost, cc, share, additive); sqrt/log ratios
// are irrational and rejected. Throws Error("EmptyApprovalSet") when the
// voter approves nothing.
Rat relative_satisfaction(const SatFn& fn, const ApprovalBallot& ballot, const Alloc& alloc,
                          const Instance& in, const KnapsackCaps& caps = {});

// Converts a (weak-)ordinal ballot to cardinal scores using a nonincreasing
// scoring vector (zero-padded to m). Strict rank r takes vector[r]; every
// project in a weak indifference class takes the mean of the entries the
// class spans. Unranked projects score 0.
CardinalBallot positional_cardinal(const Ballot& ballot, const std::vector<Rat>& vector,
                                   const Instance& in);

// Weakly decreasing normalized satisfaction: for all p, p' with
// c(p) <= c(p'): value({p}) <= value({p'}) and value({p})/c(p) >=
// value({p'})/c(p').
bool is_dns(const SatFn& fn, const Instance& in);

} // namespace pb
