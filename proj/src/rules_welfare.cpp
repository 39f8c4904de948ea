#include "pb/rules_welfare.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace pb {

namespace {

// Satisfaction of voter i with the selection flagged in `insel`; `tmp` is
// scratch to avoid reallocating.
SatValue voter_sat_flags(const Instance& in, const Profile& prof, int i,
                         const std::vector<char>& insel, const std::optional<SatFn>& sat,
                         std::vector<int>& tmp) {
    if (prof.kind() == BallotKind::Cardinal) {
        Rat s = 0;
        for (auto& [p, v] : prof.cardinal(i).scores)
            if (insel[p]) s += v;
        return SatValue::lin(s);
    }
    if (prof.kind() == BallotKind::Approval) {
        if (!sat)
            throw Error("IncompatibleProfile",
                        "approval welfare needs a satisfaction function");
        tmp.clear();
        for (int p : prof.approval(i).approved)
            if (insel[p]) tmp.push_back(p);
        return sat->of_set(in, tmp);
    }
    throw Error("IncompatibleProfile", "welfare objectives need cardinal or approval ballots");
}

Rat ballot_score(const Profile& prof, int i, int p) {
    if (prof.kind() == BallotKind::Cardinal) return prof.cardinal(i).score(p);
    if (prof.kind() == BallotKind::Approval)
        return prof.approval(i).approves(p) ? Rat(1) : Rat(0);
    throw Error("IncompatibleProfile", "welfare objectives need cardinal or approval ballots");
}

// Nash value with degenerate zero products kept comparable: a zero product
// is ranked below every positive one, and zero products compare by how many
// voters keep positive satisfaction, then by the product over those voters.
struct NashVal {
    bool all_positive = true;
    int positives = 0;
    SatValue prod = SatValue::lin(1);

    int cmp(const NashVal& o) const {
        if (all_positive != o.all_positive) return all_positive ? 1 : -1;
        if (!all_positive && positives != o.positives) return positives < o.positives ? -1 : 1;
        return prod.cmp(o.prod);
    }
};

NashVal nash_of_flags(const Instance& in, const Profile& prof, const std::vector<char>& insel,
                      const std::optional<SatFn>& sat, std::vector<int>& tmp) {
    NashVal nv;
    for (int i = 0; i < prof.n(); ++i) {
        SatValue s = voter_sat_flags(in, prof, i, insel, sat, tmp);
        if (s.is_zero()) {
            nv.all_positive = false;
        } else {
            ++nv.positives;
            nv.prod *= s;
        }
    }
    return nv;
}

SatValue value_of_flags(const Instance& in, const Profile& prof, const std::vector<char>& insel,
                        const WelfareObjective& obj, std::vector<int>& tmp) {
    switch (obj.kind) {
    case WelfareKind::Util: {
        SatValue total;
        for (int i = 0; i < prof.n(); ++i)
            total += voter_sat_flags(in, prof, i, insel, obj.sat, tmp);
        return total;
    }
    case WelfareKind::CC: {
        Rat total = 0;
        for (int i = 0; i < prof.n(); ++i) {
            Rat best = 0;
            for (int p = 0; p < in.m(); ++p)
                if (insel[p]) best = std::max(best, ballot_score(prof, i, p));
            total += best;
        }
        return SatValue::lin(total);
    }
    case WelfareKind::Egal: {
        bool first = true;
        SatValue worst;
        for (int i = 0; i < prof.n(); ++i) {
            SatValue s = voter_sat_flags(in, prof, i, insel, obj.sat, tmp);
            if (first || s < worst) {
                worst = s;
                first = false;
            }
        }
        return worst;
    }
    case WelfareKind::Nash: {
        NashVal nv = nash_of_flags(in, prof, insel, obj.sat, tmp);
        return nv.all_positive ? nv.prod : SatValue::lin(0);
    }
    }
    return SatValue();
}

} // namespace

SatValue voter_satisfaction(const Instance& in, const Profile& prof, int voter, const Alloc& a,
                            const std::optional<SatFn>& sat) {
    std::vector<char> insel(in.m(), 0);
    for (int p : a.sel) insel[p] = 1;
    std::vector<int> tmp;
    return voter_sat_flags(in, prof, voter, insel, sat, tmp);
}

SatValue welfare_value(const Instance& in, const Profile& prof, const Alloc& a,
                       const WelfareObjective& obj) {
    if (prof.kind() != BallotKind::Cardinal && prof.kind() != BallotKind::Approval)
        throw Error("IncompatibleProfile", "welfare objectives need cardinal or approval ballots");
    std::vector<char> insel(in.m(), 0);
    for (int p : a.sel) insel[p] = 1;
    std::vector<int> tmp;
    return value_of_flags(in, prof, insel, obj, tmp);
}

int approval_score(const Profile& prof, int p) {
    if (prof.kind() != BallotKind::Approval)
        throw Error("WrongProfileVariant", "approval score needs an approval profile");
    int c = 0;
    for (int i = 0; i < prof.n(); ++i)
        if (prof.approval(i).approves(p)) ++c;
    return c;
}

namespace {

bool additive_util(const Profile& prof, const WelfareObjective& obj) {
    if (obj.kind != WelfareKind::Util) return false;
    if (prof.kind() == BallotKind::Cardinal) return true;
    return prof.kind() == BallotKind::Approval && obj.sat && obj.sat->additive_over_projects();
}

Alloc maximize_additive(const Instance& in, const Profile& prof, const WelfareObjective& obj,
                        const TieBreakOrder& tb, const MaxWelfareCaps& caps) {
    std::vector<Rat> costs(in.m()), values(in.m(), Rat(0));
    for (int p = 0; p < in.m(); ++p) {
        costs[p] = in.cost(p);
        if (prof.kind() == BallotKind::Cardinal) {
            for (int i = 0; i < prof.n(); ++i) values[p] += prof.cardinal(i).score(p);
        } else {
            int score = approval_score(prof, p);
            if (score > 0) values[p] = score * obj.sat->singleton(in, p).stored();
        }
    }
    std::vector<int> pref(in.m());
    for (int k = 0; k < in.m(); ++k) pref[k] = tb.at(k);
    KnapsackResult kr = knapsack_max(costs, values, in.budget(), pref, caps.knapsack);
    return make_alloc(in, kr.chosen);
}

// Subset search in tie-break rank order. Pass one finds the optimum; pass two
// rebuilds the prefix-order minimal inclusion-maximal optimal set by greedy
// completion checks.
template <class Val, class Eval>
Alloc maximize_subsets(const Instance& in, const TieBreakOrder& tb, Eval eval, int m) {
    std::vector<char> insel(m, 0);
    bool have = false;
    Val best{};

    std::function<void(int, Rat)> walk = [&](int k, Rat left) {
        if (k == m) {
            Val v = eval(insel);
            if (!have || best.cmp(v) < 0) {
                best = v;
                have = true;
            }
            return;
        }
        int p = tb.at(k);
        if (in.cost(p) <= left) {
            insel[p] = 1;
            walk(k + 1, left - in.cost(p));
            insel[p] = 0;
        }
        walk(k + 1, left);
    };
    walk(0, in.budget());

    // completes(k): some completion over ranks >= k reaches `best`.
    std::function<bool(int, Rat)> completes = [&](int k, Rat left) -> bool {
        if (k == m) return best.cmp(eval(insel)) == 0;
        int p = tb.at(k);
        if (in.cost(p) <= left) {
            insel[p] = 1;
            if (completes(k + 1, left - in.cost(p))) {
                insel[p] = 0;
                return true;
            }
            insel[p] = 0;
        }
        return completes(k + 1, left);
    };

    std::fill(insel.begin(), insel.end(), 0);
    Rat left = in.budget();
    std::vector<int> chosen;
    for (int k = 0; k < m; ++k) {
        int p = tb.at(k);
        if (in.cost(p) > left) continue;
        insel[p] = 1;
        if (completes(k + 1, left - in.cost(p))) {
            chosen.push_back(p);
            left -= in.cost(p);
        } else {
            insel[p] = 0;
        }
    }
    return make_alloc(in, chosen);
}

struct SatWrap {
    SatValue v;
    int cmp(const SatWrap& o) const { return v.cmp(o.v); }
};

} // namespace

Alloc maximize_welfare(const Instance& in, const Profile& prof, const WelfareObjective& obj,
                       const TieBreakOrder& tb, const MaxWelfareCaps& caps) {
    require_order_match(in, tb);
    if (prof.kind() != BallotKind::Cardinal && prof.kind() != BallotKind::Approval)
        throw Error("IncompatibleProfile", "welfare objectives need cardinal or approval ballots");
    if (prof.kind() == BallotKind::Approval && obj.kind != WelfareKind::CC && !obj.sat)
        throw Error("IncompatibleProfile", "approval welfare needs a satisfaction function");
    if (additive_util(prof, obj)) return maximize_additive(in, prof, obj, tb, caps);

    if (in.m() > caps.max_subset_m)
        throw Error("CapExceeded", "subset search capped at " +
                                       std::to_string(caps.max_subset_m) + " projects");
    std::vector<int> tmp;
    if (obj.kind == WelfareKind::Nash) {
        auto eval = [&](const std::vector<char>& insel) {
            return nash_of_flags(in, prof, insel, obj.sat, tmp);
        };
        return maximize_subsets<NashVal>(in, tb, eval, in.m());
    }
    auto eval = [&](const std::vector<char>& insel) {
        return SatWrap{value_of_flags(in, prof, insel, obj, tmp)};
    };
    return maximize_subsets<SatWrap>(in, tb, eval, in.m());
}

Alloc greedy_scheme(const Instance& in, const std::vector<int>& order) {
    if (static_cast<int>(order.size()) != in.m())
        throw Error("BadTieBreak", "greedy order must cover all projects");
    std::vector<int> sel;
    Rat left = in.budget();
    for (int p : order)
        if (in.cost(p) <= left) {
            sel.push_back(p);
            left -= in.cost(p);
        }
    return make_alloc(in, sel);
}

Alloc greedy_welfare(const Instance& in, const Profile& prof, GreedyKey key,
                     const TieBreakOrder& tb) {
    require_order_match(in, tb);
    std::vector<Rat> k(in.m());
    for (int p = 0; p < in.m(); ++p) {
        Rat score(approval_score(prof, p));
        k[p] = key == GreedyKey::ScorePerCost ? Rat(score / in.cost(p)) : score;
    }
    std::vector<int> order(in.m());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (k[a] != k[b]) return k[a] > k[b];
        return tb.rank(a) < tb.rank(b);
    });
    return greedy_scheme(in, order);
}

} // namespace pb
