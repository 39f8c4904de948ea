#pragma once

#include "pb/error.hpp"
#include "pb/rational.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pb {

using ProjectId = std::string;

// Project set with positive costs and a budget limit. Projects keep their
// declaration order; all internal APIs work with dense indices 0..m-1.
class Instance {
public:
    Instance() = default;
    // Validates: ids unique, costs > 0, cost(p) <= budget for every p.
    Instance(std::vector<std::pair<ProjectId, Rat>> projects, Rat budget);

    int m() const { return static_cast<int>(ids_.size()); }
    const std::vector<ProjectId>& ids() const { return ids_; }
    const ProjectId& id(int i) const { return ids_[i]; }
    const Rat& cost(int i) const { return cost_[i]; }
    const Rat& budget() const { return budget_; }

    // Throws Error("UnknownProject") when the id is not in the instance.
    int index(const ProjectId& p) const;
    bool has(const ProjectId& p) const { return index_.count(p) > 0; }

    Rat total_cost(const std::vector<int>& sel) const;
    // All costs equal to 1 and the budget limit a positive integer.
    bool unit_cost() const;

    bool operator==(const Instance& o) const {
        return ids_ == o.ids_ && cost_ == o.cost_ && budget_ == o.budget_;
    }

private:
    std::vector<ProjectId> ids_;
    std::vector<Rat> cost_;
    Rat budget_;
    std::map<ProjectId, int> index_;
};

// Feasible subset of projects; `sel` is sorted ascending by instance index.
struct Alloc {
    std::vector<int> sel;
    Rat total;

    bool contains(int p) const;
    std::set<ProjectId> id_set(const Instance& in) const;
};

// Builds an allocation from indices or ids; throws Error("InfeasibleAllocation")
// when the total cost exceeds the budget, Error("UnknownProject") on bad ids.
Alloc make_alloc(const Instance& in, std::vector<int> sel);
Alloc make_alloc_ids(const Instance& in, const std::set<ProjectId>& ids);

struct CardinalBallot {
    // Sparse nonnegative scores, sorted by project index; zero entries omitted.
    std::vector<std::pair<int, Rat>> scores;
    Rat score(int p) const;
    bool operator==(const CardinalBallot&) const = default;
};

struct ApprovalBallot {
    std::vector<int> approved; // sorted ascending
    bool approves(int p) const;
    bool operator==(const ApprovalBallot&) const = default;
};

struct OrdinalBallot {
    std::vector<int> ranking; // best first, strict, no duplicates
    bool operator==(const OrdinalBallot&) const = default;
};

struct WeakOrdinalBallot {
    std::vector<std::vector<int>> classes; // best class first, disjoint, nonempty
    bool operator==(const WeakOrdinalBallot&) const = default;
};

struct CumulativeBallot {
    std::vector<std::pair<int, Rat>> weights; // sorted; sum <= 1
    Rat weight(int p) const;
    bool operator==(const CumulativeBallot&) const = default;
};

using Ballot =
    std::variant<CardinalBallot, ApprovalBallot, OrdinalBallot, WeakOrdinalBallot, CumulativeBallot>;

enum class BallotKind { Cardinal, Approval, Ordinal, WeakOrdinal, Cumulative };

BallotKind kind_of(const Ballot& b);
const char* kind_name(BallotKind k);

// Nonempty homogeneous list of ballots, each valid against the instance.
class Profile {
public:
    Profile() = default;
    Profile(const Instance& in, std::vector<Ballot> ballots);

    int n() const { return static_cast<int>(ballots_.size()); }
    BallotKind kind() const { return kind_; }
    const Ballot& operator[](int i) const { return ballots_[i]; }
    const std::vector<Ballot>& ballots() const { return ballots_; }

    const CardinalBallot& cardinal(int i) const;
    const ApprovalBallot& approval(int i) const;
    const OrdinalBallot& ordinal(int i) const;
    const WeakOrdinalBallot& weak_ordinal(int i) const;
    const CumulativeBallot& cumulative(int i) const;

    // Approval mask of voter i (requires m <= 64).
    std::uint64_t approval_mask(int i) const;

    bool operator==(const Profile& o) const { return ballots_ == o.ballots_; }

private:
    std::vector<Ballot> ballots_;
    BallotKind kind_ = BallotKind::Approval;
};

// Strict total order over the instance's projects making every rule resolute.
class TieBreakOrder {
public:
    enum class Kind { Lexicographic, FileOrder, Explicit };

    TieBreakOrder() = default;

    static TieBreakOrder lexicographic(const Instance& in);
    static TieBreakOrder file_order(const Instance& in);
    // Must be a permutation of the instance's ids; throws Error("BadTieBreak").
    static TieBreakOrder explicit_order(const Instance& in, const std::vector<ProjectId>& ids);

    Kind kind() const { return kind_; }

    // rank(p) = position of project index p in the order (0 = first).
    int rank(int p) const { return rank_[p]; }
    // at(k) = project index at position k.
    int at(int k) const { return order_[k]; }
    int size() const { return static_cast<int>(order_.size()); }

    // Compares project sets by their sorted rank sequences (prefix order:
    // a strict prefix is smaller). Returns <0, 0, >0.
    int compare_sets(const std::vector<int>& a, const std::vector<int>& b) const;

private:
    std::vector<int> order_;
    std::vector<int> rank_;
    Kind kind_ = Kind::FileOrder;
};

// Throws Error("BadTieBreak") unless the order covers exactly the instance's
// projects; rules call this before trusting ranks.
void require_order_match(const Instance& in, const TieBreakOrder& tb);

// --- model operations ----------------------------------------------------

bool is_feasible(const Instance& in, const std::set<ProjectId>& projects);
bool is_feasible_mask(const Instance& in, const std::vector<int>& sel);

// True iff no unselected project still fits in the leftover budget.
bool is_exhaustive(const Instance& in, const Alloc& a);

enum class BallotFormat { Plain, TApproval, Knapsack, Cumulative };

// t_approval: |approved| <= t; knapsack: c(approved) <= b; cumulative: weights
// sum to at most 1; plain: always true. Throws Error("FormatMismatch") when the
// ballot variant cannot carry the requested format.
bool validate_ballot_format(const Ballot& b, const Instance& in, BallotFormat f, int t = 0);

// Mask helpers used by the brute-force checkers (m, n <= 64).
std::uint64_t to_mask(const std::vector<int>& xs);
std::vector<int> from_mask(std::uint64_t mask);

} // namespace pb
