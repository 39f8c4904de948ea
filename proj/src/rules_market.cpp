#include "pb/rules_market.hpp"

#include "pb/lp.hpp"

#include <algorithm>
#include <numeric>

namespace pb {

namespace {

std::vector<std::vector<int>> supporter_lists(const Instance& in, const Profile& prof) {
    std::vector<std::vector<int>> supp(in.m());
    for (int i = 0; i < prof.n(); ++i) {
        if (prof.kind() == BallotKind::Approval) {
            for (int p : prof.approval(i).approved) supp[p].push_back(i);
        } else if (prof.kind() == BallotKind::Cardinal) {
            for (auto& [p, v] : prof.cardinal(i).scores)
                if (v > 0) supp[p].push_back(i);
        } else {
            throw Error("IncompatibleProfile", "market rules need approval or cardinal ballots");
        }
    }
    return supp;
}

} // namespace

std::pair<Alloc, VoterLoads> seq_phragmen(const Instance& in, const Profile& prof,
                                          const TieBreakOrder& tb, const MarketOptions& opt) {
    require_order_match(in, tb);
    if (prof.kind() != BallotKind::Approval)
        throw Error("IncompatibleProfile", "sequential Phragmen needs approval ballots");
    auto supp = supporter_lists(in, prof);
    VoterLoads loads;
    loads.load.assign(prof.n(), Rat(0));
    std::vector<char> selected(in.m(), 0);
    std::vector<int> sel;
    Rat spent = 0;

    for (;;) {
        bool any = false;
        Rat best;
        std::vector<int> argmin;
        for (int p = 0; p < in.m(); ++p) {
            if (selected[p] || supp[p].empty()) continue;
            Rat sum = in.cost(p);
            for (int i : supp[p]) sum += loads.load[i];
            Rat lstar = sum / static_cast<long>(supp[p].size());
            if (!any || lstar < best) {
                any = true;
                best = lstar;
                argmin = {p};
            } else if (lstar == best) {
                argmin.push_back(p);
            }
        }
        if (!any) break;
        int chosen = argmin[0];
        for (int p : argmin)
            if (tb.rank(p) < tb.rank(chosen)) chosen = p;
        bool overflow = false;
        if (opt.stop_on_any_tied_overflow) {
            for (int p : argmin)
                if (spent + in.cost(p) > in.budget()) overflow = true;
        } else {
            overflow = spent + in.cost(chosen) > in.budget();
        }
        if (overflow) break;

        VoterLoads::Round round;
        round.project = chosen;
        for (int i : supp[chosen]) {
            round.increments.emplace_back(i, Rat(best - loads.load[i]));
            loads.load[i] = best;
        }
        loads.history.push_back(std::move(round));
        selected[chosen] = 1;
        sel.push_back(chosen);
        spent += in.cost(chosen);
    }
    return {make_alloc(in, sel), std::move(loads)};
}

std::pair<LoadDistribution, Rat> optimal_load_distribution(const Instance& in,
                                                           const Profile& prof,
                                                           const std::vector<int>& projects) {
    if (prof.kind() != BallotKind::Approval)
        throw Error("IncompatibleProfile", "load distributions need approval ballots");
    const int n = prof.n();
    const int k = static_cast<int>(projects.size());
    // Variables: one per (approver, project) pair, then t.
    std::vector<std::vector<int>> var(n, std::vector<int>(k, -1));
    int nv = 0;
    for (int c = 0; c < k; ++c) {
        int approvers = 0;
        for (int i = 0; i < n; ++i)
            if (prof.approval(i).approves(projects[c])) {
                var[i][c] = nv++;
                ++approvers;
            }
        if (approvers == 0)
            throw Error("UnsupportedProject",
                        "project " + in.id(projects[c]) + " has no approver");
    }
    const int tvar = nv++;

    std::vector<LpConstraint> cons;
    for (int c = 0; c < k; ++c) {
        LpConstraint eq;
        eq.sense = LpSense::Eq;
        eq.rhs = in.cost(projects[c]);
        for (int i = 0; i < n; ++i)
            if (var[i][c] >= 0) eq.coef.emplace_back(var[i][c], Rat(1));
        cons.push_back(std::move(eq));
    }
    for (int i = 0; i < n; ++i) {
        LpConstraint le;
        le.sense = LpSense::Le;
        le.rhs = 0;
        for (int c = 0; c < k; ++c)
            if (var[i][c] >= 0) le.coef.emplace_back(var[i][c], Rat(1));
        if (le.coef.empty()) continue;
        le.coef.emplace_back(tvar, Rat(-1));
        cons.push_back(std::move(le));
    }
    LpResult r = lp_min(nv, {{tvar, Rat(1)}}, cons);
    if (!r.feasible || r.unbounded) throw Error("Internal", "load distribution LP failed");

    LoadDistribution d;
    d.projects = projects;
    d.ell.assign(n, std::vector<Rat>(k, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < k; ++c)
            if (var[i][c] >= 0) d.ell[i][c] = r.x[var[i][c]];
    return {std::move(d), r.objective};
}

std::pair<Alloc, LoadDistribution> maximin_support(const Instance& in, const Profile& prof,
                                                   const TieBreakOrder& tb,
                                                   const MarketOptions& opt) {
    require_order_match(in, tb);
    if (prof.kind() != BallotKind::Approval)
        throw Error("IncompatibleProfile", "maximin support needs approval ballots");
    auto supp = supporter_lists(in, prof);
    std::vector<char> selected(in.m(), 0);
    std::vector<int> sel;
    Rat spent = 0;
    LoadDistribution dist;
    dist.ell.assign(prof.n(), {});

    for (;;) {
        bool any = false;
        Rat best;
        std::vector<int> argmin;
        LoadDistribution bestDist;
        for (int p = 0; p < in.m(); ++p) {
            if (selected[p] || supp[p].empty()) continue;
            std::vector<int> trial = sel;
            trial.push_back(p);
            auto [d, value] = optimal_load_distribution(in, prof, trial);
            if (!any || value < best) {
                any = true;
                best = value;
                argmin = {p};
                bestDist = std::move(d);
            } else if (value == best) {
                argmin.push_back(p);
            }
        }
        if (!any) break;
        int chosen = argmin[0];
        for (int p : argmin)
            if (tb.rank(p) < tb.rank(chosen)) chosen = p;
        bool overflow = false;
        if (opt.stop_on_any_tied_overflow) {
            for (int p : argmin)
                if (spent + in.cost(p) > in.budget()) overflow = true;
        } else {
            overflow = spent + in.cost(chosen) > in.budget();
        }
        if (overflow) break;
        // Re-solve for the chosen project when a tie displaced it.
        if (argmin.size() > 1 || argmin[0] != chosen || bestDist.projects.empty()) {
            std::vector<int> trial = sel;
            trial.push_back(chosen);
            bestDist = optimal_load_distribution(in, prof, trial).first;
        }
        selected[chosen] = 1;
        sel.push_back(chosen);
        spent += in.cost(chosen);
        dist = std::move(bestDist);
    }
    if (dist.projects.empty() && !sel.empty())
        dist = optimal_load_distribution(in, prof, sel).first;
    return {make_alloc(in, sel), std::move(dist)};
}

namespace {

// Smallest rho with sum_i min(rem_i, rho * u_i) = c over the given
// (remaining budget, utility) pairs, or nullopt when even exhausting every
// budget stays short of c. Utilities must be positive.
std::optional<Rat> minimal_rho(std::vector<std::pair<Rat, Rat>> ru, const Rat& c) {
    std::sort(ru.begin(), ru.end(), [](const auto& a, const auto& b) {
        return a.first * b.second < b.first * a.second; // rem/u ascending
    });
    Rat capped = 0;
    Rat uncapped_u = 0;
    for (auto& [rem, u] : ru) uncapped_u += u;
    for (auto& [rem, u] : ru) {
        Rat need = c - capped;
        // rho solving capped + rho * uncapped_u = c, valid while i stays uncapped
        if (need <= 0) return Rat(0);
        Rat rho = need / uncapped_u;
        if (rho * u <= rem) return rho;
        capped += rem;
        uncapped_u -= u;
    }
    return std::nullopt;
}

// The scan runs on (remaining budget, utility) pairs and returns tau, the
// uncapped per-unit-of-utility payment scaled so that payments are
// min(rem_i, tau * u_i). The true affordability factor is rho = tau/sigma
// where sigma rescales utilities to the satisfaction value (cardinal: the
// scan already uses ballot scores, sigma = 1; approval: the scan uses unit
// utilities, sigma = stored s({p})). Cross-project comparisons multiply out
// the denominators; the sqrt scale squares both sides first.
struct Rho {
    Rat tau;
    Rat sigma;
};

int rho_cmp(const Rho& a, const Rho& b, bool sqrt_scale) {
    Rat lhs, rhs;
    if (sqrt_scale) {
        lhs = a.tau * a.tau * b.sigma;
        rhs = b.tau * b.tau * a.sigma;
    } else {
        lhs = a.tau * b.sigma;
        rhs = b.tau * a.sigma;
    }
    return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

MesResult mes_run(const Instance& in, const Profile& prof, const TieBreakOrder& tb,
                  const std::vector<std::vector<std::pair<int, Rat>>>& util,
                  const std::vector<Rat>& sigma, bool sqrt_scale) {
    const int n = prof.n();
    std::vector<Rat> rem(n, in.budget() / n);
    PriceSystem prices;
    prices.alpha = in.budget() / n;
    prices.gamma.assign(n, {});
    std::vector<char> selected(in.m(), 0);
    std::vector<int> sel;

    for (;;) {
        bool any = false;
        Rho best{};
        int chosen = -1;
        for (int p = 0; p < in.m(); ++p) {
            if (selected[p] || util[p].empty()) continue;
            std::vector<std::pair<Rat, Rat>> ru;
            for (auto& [i, u] : util[p]) ru.emplace_back(rem[i], u);
            auto tau = minimal_rho(ru, in.cost(p));
            if (!tau) continue;
            Rho cand{*tau, sigma[p]};
            if (!any || rho_cmp(cand, best, sqrt_scale) < 0 ||
                (rho_cmp(cand, best, sqrt_scale) == 0 && tb.rank(p) < tb.rank(chosen))) {
                any = true;
                best = cand;
                chosen = p;
            }
        }
        if (!any) break;
        for (auto& [i, u] : util[chosen]) {
            Rat pay = std::min(rem[i], Rat(best.tau * u));
            if (pay > 0) {
                prices.gamma[i][chosen] = pay;
                rem[i] -= pay;
            }
        }
        selected[chosen] = 1;
        sel.push_back(chosen);
    }
    return {make_alloc(in, sel), std::move(prices)};
}

} // namespace

MesResult mes(const Instance& in, const Profile& prof, const std::optional<SatFn>& sat,
              const TieBreakOrder& tb) {
    require_order_match(in, tb);
    std::vector<std::vector<std::pair<int, Rat>>> util(in.m());
    std::vector<Rat> sigma(in.m(), Rat(1));
    if (prof.kind() == BallotKind::Cardinal) {
        for (int i = 0; i < prof.n(); ++i)
            for (auto& [p, v] : prof.cardinal(i).scores)
                if (v > 0) util[p].emplace_back(i, v);
        return mes_run(in, prof, tb, util, sigma, false);
    }
    if (prof.kind() != BallotKind::Approval)
        throw Error("IncompatibleProfile", "equal shares needs cardinal or approval ballots");
    if (!sat)
        throw Error("IncompatibleProfile",
                    "equal shares over approvals needs a satisfaction function");
    if (sat->kind() == SatKind::Log)
        throw Error("UnsupportedSatisfactionAlgebra",
                    "equal shares with log satisfaction needs transcendental comparisons");
    for (int i = 0; i < prof.n(); ++i)
        for (int p : prof.approval(i).approved) util[p].emplace_back(i, Rat(1));
    for (int p = 0; p < in.m(); ++p)
        if (!util[p].empty()) sigma[p] = sat->singleton(in, p).stored();
    return mes_run(in, prof, tb, util, sigma, sat->kind() == SatKind::Sqrt);
}

namespace {

Profile positive_support_approvals(const Instance& in, const Profile& prof) {
    std::vector<Ballot> ballots;
    for (int i = 0; i < prof.n(); ++i) {
        ApprovalBallot b;
        if (prof.kind() == BallotKind::Approval) {
            b = prof.approval(i);
        } else {
            for (auto& [p, v] : prof.cardinal(i).scores)
                if (v > 0) b.approved.push_back(p);
        }
        ballots.emplace_back(std::move(b));
    }
    return Profile(in, std::move(ballots));
}

Alloc greedy_fill(const Alloc& base, const Instance& in, const Profile& prof, GreedyKey key,
                  const TieBreakOrder& tb) {
    Rat leftover = in.budget() - base.total;
    std::vector<std::pair<ProjectId, Rat>> rest;
    for (int p = 0; p < in.m(); ++p)
        if (!base.contains(p) && in.cost(p) <= leftover) rest.emplace_back(in.id(p), in.cost(p));
    if (rest.empty()) return base;

    Instance sub(rest, leftover);
    std::vector<Ballot> ballots;
    Profile approvals = positive_support_approvals(in, prof);
    for (int i = 0; i < prof.n(); ++i) {
        ApprovalBallot b;
        for (int p : approvals.approval(i).approved)
            if (sub.has(in.id(p))) b.approved.push_back(sub.index(in.id(p)));
        std::sort(b.approved.begin(), b.approved.end());
        ballots.emplace_back(std::move(b));
    }
    Profile subProf(sub, std::move(ballots));
    std::vector<ProjectId> order;
    for (int k = 0; k < in.m(); ++k)
        if (sub.has(in.id(tb.at(k)))) order.push_back(in.id(tb.at(k)));
    Alloc extra = greedy_welfare(sub, subProf, key, TieBreakOrder::explicit_order(sub, order));

    std::vector<int> sel = base.sel;
    for (int q : extra.sel) sel.push_back(in.index(sub.id(q)));
    return make_alloc(in, sel);
}

} // namespace

Alloc complete(const RuleFn& rule, const CompletionSpec& spec, const Instance& in,
               const Profile& prof, const TieBreakOrder& tb) {
    switch (spec.method) {
    case CompletionMethod::GreedyCompletion: {
        Alloc base = rule(in, prof, tb);
        return greedy_fill(base, in, prof, spec.key, tb);
    }
    case CompletionMethod::BudgetVariation: {
        Rat step = spec.step.value_or(in.budget() / prof.n());
        if (step <= 0) throw Error("MethodInapplicable", "budget step must be positive");
        Rat total = 0;
        for (int p = 0; p < in.m(); ++p) total += in.cost(p);
        Alloc last = rule(in, prof, tb);
        if (is_exhaustive(in, last)) return last;
        // Once per-voter shares cover the grand total, share-based rules have
        // saturated; past that point nothing new can happen.
        Rat bound = Rat(prof.n()) * Rat(total > in.budget() ? total : in.budget());
        for (Rat b2 = in.budget() + step; b2 <= bound; b2 += step) {
            std::vector<std::pair<ProjectId, Rat>> projs;
            for (int p = 0; p < in.m(); ++p) projs.emplace_back(in.id(p), in.cost(p));
            Instance raised(projs, b2);
            Profile prof2(raised, prof.ballots());
            std::vector<ProjectId> order;
            for (int k = 0; k < in.m(); ++k) order.push_back(in.id(tb.at(k)));
            Alloc out = rule(raised, prof2, TieBreakOrder::explicit_order(raised, order));
            if (out.total > in.budget()) break; // infeasible for the original limit
            last = make_alloc(in, out.sel);
            if (is_exhaustive(in, last)) break;
        }
        return last;
    }
    case CompletionMethod::Perturbation: {
        if (prof.kind() != BallotKind::Cardinal)
            throw Error("MethodInapplicable", "perturbation needs a cardinal profile");
        Rat eps;
        if (spec.epsilon) {
            eps = *spec.epsilon;
            if (eps <= 0) throw Error("MethodInapplicable", "epsilon must be positive");
        } else {
            Rat minpos = 0;
            for (int i = 0; i < prof.n(); ++i)
                for (auto& [p, v] : prof.cardinal(i).scores)
                    if (v > 0 && (minpos == 0 || v < minpos)) minpos = v;
            if (minpos == 0) minpos = 1;
            eps = minpos / (2 * static_cast<long>(in.m()) * prof.n());
        }
        std::vector<Ballot> ballots;
        for (int i = 0; i < prof.n(); ++i) {
            CardinalBallot b;
            for (int p = 0; p < in.m(); ++p) {
                Rat v = prof.cardinal(i).score(p);
                b.scores.emplace_back(p, v > 0 ? v : eps);
            }
            ballots.emplace_back(std::move(b));
        }
        Profile perturbed(in, std::move(ballots));
        return rule(in, perturbed, tb);
    }
    }
    throw Error("MethodInapplicable", "unknown completion method");
}

} // namespace pb
