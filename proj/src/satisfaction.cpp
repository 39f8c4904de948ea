#include "pb/satisfaction.hpp"

#include <algorithm>

namespace pb {

SatFn SatFn::additive(const Instance& in, const std::map<ProjectId, Rat>& values) {
    SatFn f(SatKind::Additive);
    f.additive_.assign(in.m(), Rat(0));
    for (auto& [id, v] : values) {
        if (v <= 0) throw Error("BadSatValue", "additive satisfaction values must be positive");
        f.additive_[in.index(id)] = v;
    }
    return f;
}

SatFn SatFn::share(const Instance& in, const Profile& prof) {
    if (prof.kind() != BallotKind::Approval)
        throw Error("MissingContext", "share satisfaction needs an approval profile");
    SatFn f(SatKind::Share);
    f.supporters_.assign(in.m(), 0);
    for (int i = 0; i < prof.n(); ++i)
        for (int p : prof.approval(i).approved) ++f.supporters_[p];
    return f;
}

SatFn SatFn::by_name(const std::string& name, const Instance& in, const Profile* prof) {
    if (name == "card") return card();
    if (name == "cost") return cost();
    if (name == "cc") return cc();
    if (name == "log") return log_fn();
    if (name == "sqrt") return sqrt_fn();
    if (name == "share") {
        if (!prof) throw Error("MissingContext", "share satisfaction needs a profile");
        return share(in, *prof);
    }
    throw Error("UnknownSatisfaction", "no satisfaction function named '" + name + "'");
}

const char* SatFn::name() const {
    switch (kind_) {
    case SatKind::Card: return "card";
    case SatKind::Cost: return "cost";
    case SatKind::CC: return "cc";
    case SatKind::Share: return "share";
    case SatKind::Log: return "log";
    case SatKind::Sqrt: return "sqrt";
    case SatKind::Additive: return "additive";
    }
    return "?";
}

bool SatFn::additive_over_projects() const {
    switch (kind_) {
    case SatKind::Card:
    case SatKind::Cost:
    case SatKind::Share:
    case SatKind::Additive: return true;
    default: return false;
    }
}

bool SatFn::strictly_increasing() const {
    switch (kind_) {
    case SatKind::CC: return false;
    case SatKind::Additive:
        // construction rejects nonpositive values, so always strict
        return true;
    default: return true; // card, cost, log, sqrt, share: every project adds value
    }
}

SatValue SatFn::of_set(const Instance& in, const std::vector<int>& P) const {
    switch (kind_) {
    case SatKind::Card: return SatValue::lin(Rat(static_cast<long>(P.size())));
    case SatKind::Cost: return SatValue::lin(in.total_cost(P));
    case SatKind::CC: return SatValue::lin(P.empty() ? Rat(0) : Rat(1));
    case SatKind::Share: {
        Rat s = 0;
        for (int p : P) {
            if (supporters_[p] == 0)
                throw Error("MissingContext",
                            "share satisfaction of a project with no supporters is undefined");
            s += in.cost(p) / supporters_[p];
        }
        return SatValue::lin(s);
    }
    case SatKind::Log: return SatValue::log_of(Rat(1 + in.total_cost(P)));
    case SatKind::Sqrt: return SatValue::sqrt_of(in.total_cost(P));
    case SatKind::Additive: {
        Rat s = 0;
        for (int p : P) s += additive_[p];
        return SatValue::lin(s);
    }
    }
    return SatValue();
}

SatValue SatFn::singleton(const Instance& in, int p) const {
    return of_set(in, {p});
}

SatValue evaluate(const SatFn& fn, const ApprovalBallot& ballot, const Alloc& alloc,
                  const Instance& in) {
    std::vector<int> inter;
    std::set_intersection(ballot.approved.begin(), ballot.approved.end(), alloc.sel.begin(),
                          alloc.sel.end(), std::back_inserter(inter));
    return fn.of_set(in, inter);
}

namespace {

// Max satisfaction over feasible subsets of `items`, linear-scale functions
// only. DP first, subset search fallback on ScaleOverflow.
Rat max_feasible_value(const SatFn& fn, const Instance& in, const std::vector<int>& items,
                       const KnapsackCaps& caps) {
    if (fn.kind() == SatKind::CC) return items.empty() ? Rat(0) : Rat(1);
    std::vector<Rat> costs, values;
    for (int p : items) {
        costs.push_back(in.cost(p));
        values.push_back(fn.singleton(in, p).stored());
    }
    try {
        return knapsack_max_value(costs, values, in.budget(), caps);
    } catch (const Error& e) {
        if (e.kind() != "ScaleOverflow") throw;
    }
    if (items.size() > 24)
        throw Error("CapExceeded", "subset-search fallback capped at 24 approved projects");
    Rat best = 0;
    const size_t k = items.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        Rat cost = 0, val = 0;
        for (size_t j = 0; j < k; ++j)
            if (mask >> j & 1) {
                cost += costs[j];
                val += values[j];
            }
        if (cost <= in.budget() && val > best) best = val;
    }
    return best;
}

} // namespace

Rat relative_satisfaction(const SatFn& fn, const ApprovalBallot& ballot, const Alloc& alloc,
                          const Instance& in, const KnapsackCaps& caps) {
    if (ballot.approved.empty())
        throw Error("EmptyApprovalSet", "relative satisfaction needs a nonempty approval set");
    if (fn.kind() == SatKind::Log || fn.kind() == SatKind::Sqrt)
        throw Error("UnsupportedSatisfactionAlgebra",
                    "relative satisfaction ratios on the log/sqrt scales are irrational");
    SatValue num = evaluate(fn, ballot, alloc, in);
    Rat den = max_feasible_value(fn, in, ballot.approved, caps);
    if (den == 0) return Rat(0); // approved projects exist, so only possible for CC with none
    Rat r = num.stored() / den;
    return r;
}

CardinalBallot positional_cardinal(const Ballot& ballot, const std::vector<Rat>& vec,
                                   const Instance& in) {
    for (size_t i = 0; i + 1 < vec.size(); ++i)
        if (vec[i] < vec[i + 1])
            throw Error("BadScoringVector", "scoring vector must be nonincreasing");
    for (const Rat& v : vec)
        if (v < 0) throw Error("BadScoringVector", "scoring vector entries must be nonnegative");

    auto at = [&](size_t r) { return r < vec.size() ? vec[r] : Rat(0); };
    std::vector<std::pair<int, Rat>> scores;

    if (auto* o = std::get_if<OrdinalBallot>(&ballot)) {
        for (size_t r = 0; r < o->ranking.size(); ++r) {
            Rat s = at(r);
            if (s != 0) scores.emplace_back(o->ranking[r], s);
        }
    } else if (auto* w = std::get_if<WeakOrdinalBallot>(&ballot)) {
        size_t start = 0;
        for (const auto& cls : w->classes) {
            Rat sum = 0;
            for (size_t k = 0; k < cls.size(); ++k) sum += at(start + k);
            Rat mean = sum / static_cast<long>(cls.size());
            if (mean != 0)
                for (int p : cls) scores.emplace_back(p, mean);
            start += cls.size();
        }
    } else {
        throw Error("WrongProfileVariant", "positional scoring needs an ordinal ballot");
    }
    std::sort(scores.begin(), scores.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    (void)in;
    return CardinalBallot{std::move(scores)};
}

namespace {

// value({p}) * c(q) as an exactly comparable quantity; log scale handled by
// the caller.
SatValue scaled_singleton(const SatFn& fn, const Instance& in, int p, const Rat& factor) {
    SatValue v = fn.singleton(in, p);
    return v * SatValue::lin(factor);
}

// (1+cp)^(cq) vs (1+cq)^(cp) with rational exponents, by raising both sides
// to the common integer power den(cp)*den(cq).
int cmp_log_ratio(const Instance& in, int p, int q) {
    Rat xp = 1 + in.cost(p), xq = 1 + in.cost(q);
    Rat cp = in.cost(p), cq = in.cost(q);
    mpz_class e_p = cq.get_num() * cp.get_den(); // exponent for xp
    mpz_class e_q = cp.get_num() * cq.get_den(); // exponent for xq
    if (e_p > 20000 || e_q > 20000)
        throw Error("CapExceeded", "dns check for log satisfaction: exponent too large");
    auto powr = [](const Rat& x, unsigned long e) {
        Rat r;
        mpz_pow_ui(r.get_num_mpz_t(), x.get_num().get_mpz_t(), e);
        mpz_pow_ui(r.get_den_mpz_t(), x.get_den().get_mpz_t(), e);
        return r;
    };
    Rat lhs = powr(xp, e_p.get_ui()), rhs = powr(xq, e_q.get_ui());
    return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

} // namespace

bool is_dns(const SatFn& fn, const Instance& in) {
    for (int p = 0; p < in.m(); ++p)
        for (int q = 0; q < in.m(); ++q) {
            if (in.cost(p) > in.cost(q)) continue;
            // c(p) <= c(q): need value(p) <= value(q) ...
            if (fn.singleton(in, p) > fn.singleton(in, q)) return false;
            // ... and value(p)/c(p) >= value(q)/c(q).
            if (fn.kind() == SatKind::Log) {
                // log(1+cp)/cp >= log(1+cq)/cq iff (1+cp)^cq >= (1+cq)^cp
                if (cmp_log_ratio(in, p, q) < 0) return false;
            } else {
                if (scaled_singleton(fn, in, p, in.cost(q)) <
                    scaled_singleton(fn, in, q, in.cost(p)))
                    return false;
            }
        }
    return true;
}

} // namespace pb
