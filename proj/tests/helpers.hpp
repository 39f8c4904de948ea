#pragma once

// Shared fixtures and generators for the test binaries. Header-only; include
// after doctest.h.

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pb/model.hpp"

namespace th {

using pb::Alloc;
using pb::Ballot;
using pb::Instance;
using pb::Profile;
using pb::Rat;

inline std::string data_path(const std::string& name) {
    return std::string(PB_TEST_DATA) + "/" + name;
}

struct Election {
    Instance in;
    Profile prof;
};

inline Instance make_instance(std::vector<std::pair<std::string, Rat>> projects, Rat budget) {
    return Instance(std::move(projects), std::move(budget));
}

inline Instance unit_instance(int m, long budget) {
    std::vector<std::pair<std::string, Rat>> ps;
    for (int i = 0; i < m; ++i) ps.emplace_back("p" + std::to_string(i + 1), Rat(1));
    return Instance(std::move(ps), Rat(budget));
}

inline Profile approval_profile(const Instance& in, const std::vector<std::vector<std::string>>& votes) {
    std::vector<Ballot> bs;
    for (const auto& v : votes) {
        pb::ApprovalBallot b;
        for (const auto& id : v) b.approved.push_back(in.index(id));
        std::sort(b.approved.begin(), b.approved.end());
        bs.push_back(std::move(b));
    }
    return Profile(in, std::move(bs));
}

// Dense per-voter score rows; zeros are dropped into the sparse ballot form.
inline Profile cardinal_profile(const Instance& in, const std::vector<std::vector<Rat>>& rows) {
    std::vector<Ballot> bs;
    for (const auto& row : rows) {
        pb::CardinalBallot b;
        for (int p = 0; p < in.m(); ++p)
            if (p < static_cast<int>(row.size()) && row[p] != 0) b.scores.emplace_back(p, row[p]);
        bs.push_back(std::move(b));
    }
    return Profile(in, std::move(bs));
}

// costs (p1..p5) = 6,3,1,1,1, budget 6; voters {p1}, {p2}, {p3,p4,p5}.
inline Election e1() {
    Instance in = make_instance(
        {{"p1", Rat(6)}, {"p2", Rat(3)}, {"p3", Rat(1)}, {"p4", Rat(1)}, {"p5", Rat(1)}}, Rat(6));
    Profile prof = approval_profile(in, {{"p1"}, {"p2"}, {"p3", "p4", "p5"}});
    return {std::move(in), std::move(prof)};
}

// Unit costs, m = 3, budget 2; three singleton voters plus one approving all.
inline Election e2() {
    Instance in = unit_instance(3, 2);
    Profile prof = approval_profile(in, {{"p1"}, {"p2"}, {"p3"}, {"p1", "p2", "p3"}});
    return {std::move(in), std::move(prof)};
}

// Unit costs, m = 2, budget 2; disjoint singleton voters.
inline Election e3() {
    Instance in = unit_instance(2, 2);
    Profile prof = approval_profile(in, {{"p1"}, {"p2"}});
    return {std::move(in), std::move(prof)};
}

// Unit costs, m = 2, budget 2; one broad voter, one narrow.
inline Election e5() {
    Instance in = unit_instance(2, 2);
    Profile prof = approval_profile(in, {{"p1", "p2"}, {"p1"}});
    return {std::move(in), std::move(prof)};
}

inline std::vector<Alloc> all_feasible_allocs(const Instance& in) {
    std::vector<Alloc> out;
    const int m = in.m();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        auto sel = pb::from_mask(mask);
        if (pb::is_feasible_mask(in, sel)) out.push_back(pb::make_alloc(in, std::move(sel)));
    }
    return out;
}

inline std::vector<int> inter(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline int rand_int(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Integer costs in [1, 6], budget in [max cost, total cost].
inline Instance rand_instance(std::mt19937& rng, int m_max, bool rational_costs = false) {
    const int m = rand_int(rng, 1, m_max);
    std::vector<std::pair<std::string, Rat>> ps;
    Rat total(0), maxc(0);
    for (int i = 0; i < m; ++i) {
        Rat c = rational_costs ? pb::rat_of(rand_int(rng, 1, 12), rand_int(rng, 1, 4))
                               : Rat(rand_int(rng, 1, 6));
        if (c > maxc) maxc = c;
        total += c;
        ps.emplace_back("p" + std::to_string(i + 1), std::move(c));
    }
    // Budget uniform between the largest cost and the grand total (in eighths
    // so rational budgets appear too).
    Rat span = total - maxc;
    Rat budget = maxc + span * pb::rat_of(rand_int(rng, 0, 8), 8);
    return Instance(std::move(ps), std::move(budget));
}

inline Election rand_approval(std::mt19937& rng, int n_max, int m_max) {
    Instance in = rand_instance(rng, m_max);
    const int n = rand_int(rng, 1, n_max);
    std::vector<Ballot> bs;
    for (int i = 0; i < n; ++i) {
        pb::ApprovalBallot b;
        for (int p = 0; p < in.m(); ++p)
            if (rand_int(rng, 0, 1)) b.approved.push_back(p);
        bs.push_back(std::move(b));
    }
    Profile prof(in, std::move(bs));
    return {std::move(in), std::move(prof)};
}

inline Election rand_cardinal(std::mt19937& rng, int n_max, int m_max, int max_score = 2,
                              bool rational_costs = true, bool all_positive = false) {
    Instance in = rand_instance(rng, m_max, rational_costs);
    const int n = rand_int(rng, 1, n_max);
    std::vector<Ballot> bs;
    for (int i = 0; i < n; ++i) {
        pb::CardinalBallot b;
        for (int p = 0; p < in.m(); ++p) {
            int s = rand_int(rng, all_positive ? 1 : 0, max_score);
            if (s > 0) b.scores.emplace_back(p, Rat(s));
        }
        bs.push_back(std::move(b));
    }
    Profile prof(in, std::move(bs));
    return {std::move(in), std::move(prof)};
}

// Random feasible allocation: walk a random project order, keep what fits on a
// coin flip. Can return the empty allocation.
inline Alloc rand_feasible(std::mt19937& rng, const Instance& in) {
    std::vector<int> order(in.m());
    for (int i = 0; i < in.m(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> sel;
    Rat spent(0);
    for (int p : order) {
        if (Rat(spent + in.cost(p)) <= in.budget() && rand_int(rng, 0, 1)) {
            sel.push_back(p);
            spent += in.cost(p);
        }
    }
    std::sort(sel.begin(), sel.end());
    return pb::make_alloc(in, std::move(sel));
}

}  // namespace th
