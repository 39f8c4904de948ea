#include "pb/axioms_other.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pb {

namespace {

std::string id_list(const Instance& in, const std::vector<int>& sel) {
    if (sel.empty()) return "{}";
    std::string s = "{";
    for (std::size_t k = 0; k < sel.size(); ++k) {
        if (k) s += ",";
        s += in.id(sel[static_cast<int>(k)]);
    }
    return s + "}";
}

// Ascending-list lexicographic order on approval masks: the lowest differing
// index decides, and a strict prefix sorts before its extensions.
bool mask_list_less(std::uint64_t a, std::uint64_t b) {
    if (a == b) return false;
    std::uint64_t d = a ^ b;
    std::uint64_t low = d & (~d + 1);
    std::uint64_t later = ~((low << 1) - 1);
    if (a & low) return (b & later) != 0;
    return (a & later) == 0;
}

mpz_class factorial(int k) {
    mpz_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

InstanceTransform InstanceTransform::discount(ProjectId p, Rat cost) {
    InstanceTransform t;
    t.kind = Kind::Discount;
    t.project = std::move(p);
    t.new_cost = std::move(cost);
    return t;
}

InstanceTransform InstanceTransform::limit_raise(Rat budget) {
    InstanceTransform t;
    t.kind = Kind::LimitRaise;
    t.new_budget = std::move(budget);
    return t;
}

InstanceTransform InstanceTransform::split(ProjectId p,
                                           std::vector<std::pair<ProjectId, Rat>> parts) {
    InstanceTransform t;
    t.kind = Kind::Split;
    t.project = std::move(p);
    t.parts = std::move(parts);
    return t;
}

InstanceTransform InstanceTransform::merge(std::set<ProjectId> group, ProjectId id) {
    InstanceTransform t;
    t.kind = Kind::Merge;
    t.merged = std::move(group);
    t.merged_id = std::move(id);
    return t;
}

std::pair<Instance, Profile> apply_transform(const InstanceTransform& t, const Instance& in,
                                             const Profile& prof) {
    switch (t.kind) {
    case InstanceTransform::Kind::Discount: {
        int p = in.index(t.project);
        if (!(t.new_cost > 0) || !(t.new_cost < in.cost(p)))
            throw Error("InvalidTransform",
                        "discount of " + t.project + " must lower the cost to a positive value");
        std::vector<std::pair<ProjectId, Rat>> projects;
        for (int j = 0; j < in.m(); ++j)
            projects.emplace_back(in.id(j), j == p ? t.new_cost : in.cost(j));
        Instance out(std::move(projects), in.budget());
        Profile pr(out, prof.ballots());
        return {std::move(out), std::move(pr)};
    }
    case InstanceTransform::Kind::LimitRaise: {
        // Every cost fits the old limit already (instance invariant), so only
        // the strict raise needs checking.
        if (!(t.new_budget > in.budget()))
            throw Error("InvalidTransform", "limit raise must strictly increase the budget");
        std::vector<std::pair<ProjectId, Rat>> projects;
        for (int j = 0; j < in.m(); ++j) projects.emplace_back(in.id(j), in.cost(j));
        Instance out(std::move(projects), t.new_budget);
        Profile pr(out, prof.ballots());
        return {std::move(out), std::move(pr)};
    }
    case InstanceTransform::Kind::Split: {
        if (prof.kind() != BallotKind::Approval)
            throw Error("WrongProfileVariant", "split transforms need an approval profile");
        int p = in.index(t.project);
        if (t.parts.empty()) throw Error("InvalidTransform", "split needs at least one part");
        Rat sum = 0;
        std::set<ProjectId> fresh;
        for (const auto& [pid, c] : t.parts) {
            if (!(c > 0))
                throw Error("InvalidTransform", "split part " + pid + " needs a positive cost");
            if (in.has(pid))
                throw Error("InvalidTransform", "split part id " + pid + " already in the instance");
            if (!fresh.insert(pid).second)
                throw Error("InvalidTransform", "duplicate split part id " + pid);
            sum += c;
        }
        if (sum != in.cost(p))
            throw Error("InvalidTransform",
                        "split parts of " + t.project + " must sum to its cost " +
                            rat_str(in.cost(p)));
        std::vector<std::pair<ProjectId, Rat>> projects;
        for (int j = 0; j < in.m(); ++j) {
            if (j == p)
                for (const auto& part : t.parts) projects.push_back(part);
            else
                projects.emplace_back(in.id(j), in.cost(j));
        }
        Instance out(std::move(projects), in.budget());
        std::vector<Ballot> ballots;
        ballots.reserve(prof.n());
        for (int i = 0; i < prof.n(); ++i) {
            std::vector<int> approved;
            for (int j : prof.approval(i).approved) {
                if (j == p)
                    for (const auto& [pid, c] : t.parts) approved.push_back(out.index(pid));
                else
                    approved.push_back(out.index(in.id(j)));
            }
            std::sort(approved.begin(), approved.end());
            ballots.push_back(ApprovalBallot{std::move(approved)});
        }
        Profile pr(out, std::move(ballots));
        return {std::move(out), std::move(pr)};
    }
    case InstanceTransform::Kind::Merge: {
        if (prof.kind() != BallotKind::Approval)
            throw Error("WrongProfileVariant", "merge transforms need an approval profile");
        if (t.merged.empty()) throw Error("InvalidTransform", "merge needs a nonempty group");
        if (in.has(t.merged_id))
            throw Error("InvalidTransform",
                        "merged id " + t.merged_id + " already in the instance");
        std::set<int> members;
        Rat sum = 0;
        for (const auto& pid : t.merged) {
            int j = in.index(pid);
            members.insert(j);
            sum += in.cost(j);
        }
        if (sum > in.budget())
            throw Error("InvalidTransform",
                        "merged cost " + rat_str(sum) + " exceeds the budget limit " +
                            rat_str(in.budget()));
        int anchor = *members.begin();
        std::vector<std::pair<ProjectId, Rat>> projects;
        for (int j = 0; j < in.m(); ++j) {
            if (j == anchor)
                projects.emplace_back(t.merged_id, sum);
            else if (!members.count(j))
                projects.emplace_back(in.id(j), in.cost(j));
        }
        Instance out(std::move(projects), in.budget());
        int merged_ix = out.index(t.merged_id);
        std::vector<Ballot> ballots;
        ballots.reserve(prof.n());
        for (int i = 0; i < prof.n(); ++i) {
            std::vector<int> approved;
            bool any = false;
            for (int j : prof.approval(i).approved) {
                if (members.count(j))
                    any = true;
                else
                    approved.push_back(out.index(in.id(j)));
            }
            if (any) approved.push_back(merged_ix);
            std::sort(approved.begin(), approved.end());
            ballots.push_back(ApprovalBallot{std::move(approved)});
        }
        Profile pr(out, std::move(ballots));
        return {std::move(out), std::move(pr)};
    }
    }
    throw Error("InvalidTransform", "unknown transform kind");
}

const char* monotonicity_name(MonotonicityKind k) {
    switch (k) {
    case MonotonicityKind::Discount: return "discount";
    case MonotonicityKind::Limit: return "limit";
    case MonotonicityKind::Splitting: return "splitting";
    case MonotonicityKind::Merging: return "merging";
    }
    return "?";
}

std::optional<MonotonicityKind> monotonicity_by_name(const std::string& name) {
    if (name == "discount") return MonotonicityKind::Discount;
    if (name == "limit") return MonotonicityKind::Limit;
    if (name == "splitting") return MonotonicityKind::Splitting;
    if (name == "merging") return MonotonicityKind::Merging;
    return std::nullopt;
}

MonotonicityReport check_monotonicity(const RuleFn& rule, MonotonicityKind kind,
                                      const Instance& in, const Profile& prof,
                                      const InstanceTransform& t, const TieBreakOrder& tb) {
    using K = InstanceTransform::Kind;
    K want = K::Discount;
    switch (kind) {
    case MonotonicityKind::Discount: want = K::Discount; break;
    case MonotonicityKind::Limit: want = K::LimitRaise; break;
    case MonotonicityKind::Splitting: want = K::Split; break;
    case MonotonicityKind::Merging: want = K::Merge; break;
    }
    if (t.kind != want)
        throw Error("InvalidTransform", std::string("transform does not match monotonicity kind ") +
                                            monotonicity_name(kind));

    MonotonicityReport rep;
    auto [tin, tprof] = apply_transform(t, in, prof);
    rep.transformed = tin;
    rep.transformed_profile = tprof;
    rep.before = rule(in, prof, tb);

    // The given order covers the original projects only; the transformed run
    // rebuilds the same kind of order over the new project set, so fresh ids
    // are ranked by their own identity (lexicographic) or their position
    // (file order). An explicit list cannot name fresh ids, so it is remapped
    // positionally: split parts take the slot of the split project in part
    // order, a merge takes its first member's slot.
    TieBreakOrder ttb;
    switch (tb.kind()) {
    case TieBreakOrder::Kind::Lexicographic: ttb = TieBreakOrder::lexicographic(tin); break;
    case TieBreakOrder::Kind::FileOrder: ttb = TieBreakOrder::file_order(tin); break;
    case TieBreakOrder::Kind::Explicit: {
        std::vector<ProjectId> ids;
        ids.reserve(static_cast<std::size_t>(tin.m()));
        for (int k = 0; k < tb.size(); ++k) {
            const ProjectId& pid = in.id(tb.at(k));
            if (t.kind == K::Split && pid == t.project) {
                for (const auto& [part, c] : t.parts) ids.push_back(part);
            } else if (t.kind == K::Merge && t.merged.count(pid)) {
                if (ids.end() == std::find(ids.begin(), ids.end(), t.merged_id))
                    ids.push_back(t.merged_id);
            } else {
                ids.push_back(pid);
            }
        }
        ttb = TieBreakOrder::explicit_order(tin, ids);
        break;
    }
    }

    std::vector<ProjectId> focus; // must stay selected for the precondition
    if (kind == MonotonicityKind::Discount || kind == MonotonicityKind::Splitting)
        focus.push_back(t.project);
    if (kind == MonotonicityKind::Merging) focus.assign(t.merged.begin(), t.merged.end());
    for (const auto& pid : focus) {
        if (!rep.before.contains(in.index(pid))) {
            rep.status = VerdictStatus::Inapplicable;
            rep.detail = "PreconditionUnmet: project " + pid +
                         " not selected on the original instance; before=" +
                         id_list(in, rep.before.sel);
            return rep;
        }
    }

    rep.after = rule(tin, tprof, ttb);
    std::set<ProjectId> after_ids = rep.after.id_set(tin);
    bool ok = true;
    std::string what;
    switch (kind) {
    case MonotonicityKind::Discount:
        ok = after_ids.count(t.project) > 0;
        what = ok ? "discounted project " + t.project + " stays selected"
                  : "discounted project " + t.project + " was dropped";
        break;
    case MonotonicityKind::Limit:
        what = "every selected project survives the budget raise";
        for (const auto& pid : rep.before.id_set(in)) {
            if (!after_ids.count(pid)) {
                ok = false;
                what = "project " + pid + " was dropped after the budget raise";
                break;
            }
        }
        break;
    case MonotonicityKind::Splitting: {
        ok = false;
        for (const auto& [pid, c] : t.parts)
            if (after_ids.count(pid)) {
                ok = true;
                break;
            }
        what = ok ? "a part of " + t.project + " is selected"
                  : "no part of " + t.project + " is selected after the split";
        break;
    }
    case MonotonicityKind::Merging:
        ok = after_ids.count(t.merged_id) > 0;
        what = ok ? "merged project " + t.merged_id + " is selected"
                  : "merged project " + t.merged_id + " is not selected";
        break;
    }
    rep.status = ok ? VerdictStatus::Satisfied : VerdictStatus::Violated;
    rep.detail = what + "; before=" + id_list(in, rep.before.sel) +
                 " after=" + id_list(tin, rep.after.sel);
    return rep;
}

std::optional<ManipulationFound> find_manipulation(const RuleFn& rule, const Instance& in,
                                                   const Profile& prof, int voter,
                                                   const std::optional<SatFn>& sat,
                                                   bool approximate, const TieBreakOrder& tb,
                                                   const EnumCaps& caps) {
    if (voter < 0 || voter >= prof.n())
        throw Error("UnknownVoter", "voter index " + std::to_string(voter) + " out of range");
    const int m = in.m();

    auto run = [&](const Ballot& b) {
        std::vector<Ballot> ballots = prof.ballots();
        ballots[voter] = b;
        Profile p2(in, std::move(ballots));
        return rule(in, p2, tb);
    };

    if (prof.kind() == BallotKind::Approval) {
        if (!sat)
            throw Error("MissingSatisfaction",
                        "approval manipulation search needs a satisfaction function");
        int cap = std::min(caps.max_m, 20);
        if (m > cap)
            throw Error("CapExceeded", "find_manipulation: m=" + std::to_string(m) +
                                           " exceeds enumeration cap " + std::to_string(cap));

        const std::vector<int>& mine = prof.approval(voter).approved;
        const std::uint64_t truth = prof.approval_mask(voter);
        Alloc truthful = rule(in, prof, tb);

        auto truth_sat = [&](std::uint64_t selected) {
            return sat->of_set(in, from_mask(selected & truth));
        };
        SatValue base = truth_sat(to_mask(truthful.sel));
        // Approximate mode wants the deviation to beat the truthful outcome
        // plus any one project; on a fixed scale that is one threshold.
        SatValue thr = base;
        if (approximate) {
            for (int p = 0; p < m; ++p) {
                SatValue v = truth_sat(to_mask(truthful.sel) | (std::uint64_t(1) << p));
                if (v > thr) thr = v;
            }
        }

        std::vector<std::uint64_t> cand;
        cand.reserve((std::size_t(1) << m) - 1);
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m); ++mask)
            if (mask != truth) cand.push_back(mask);
        std::sort(cand.begin(), cand.end(), [&](std::uint64_t x, std::uint64_t y) {
            int dx = std::popcount(x ^ truth), dy = std::popcount(y ^ truth);
            if (dx != dy) return dx < dy;
            return mask_list_less(x, y);
        });

        for (std::uint64_t mask : cand) {
            Ballot b = ApprovalBallot{from_mask(mask)};
            Alloc after = run(b);
            SatValue va = truth_sat(to_mask(after.sel));
            if (!(va > thr)) continue;

            // Re-verify with a fresh rule run and plain set arithmetic before
            // reporting the deviation.
            Alloc again = run(b);
            bool good = again.sel == after.sel;
            if (good) {
                std::vector<int> win;
                std::set_intersection(again.sel.begin(), again.sel.end(), mine.begin(),
                                      mine.end(), std::back_inserter(win));
                SatValue va2 = sat->of_set(in, win);
                for (int p = -1; p < m && good; ++p) {
                    if (p >= 0 && !approximate) break;
                    std::vector<int> u = truthful.sel;
                    if (p >= 0 && !truthful.contains(p)) {
                        u.push_back(p);
                        std::sort(u.begin(), u.end());
                    }
                    std::vector<int> got;
                    std::set_intersection(u.begin(), u.end(), mine.begin(), mine.end(),
                                          std::back_inserter(got));
                    good = va2 > sat->of_set(in, got);
                }
            }
            if (!good)
                throw Error("WitnessMismatch",
                            "manipulation gain failed independent re-verification");
            std::string g = approximate
                                ? "satisfaction " + va.str() + " beats " + thr.str() +
                                      " (best truthful outcome plus one project)"
                                : "satisfaction " + base.str() + " -> " + va.str();
            return ManipulationFound{b, truthful, after, g};
        }
        return std::nullopt;
    }

    if (prof.kind() == BallotKind::Cardinal) {
        std::vector<Rat> truth(m, Rat(0));
        for (const auto& [p, s] : prof.cardinal(voter).scores) truth[p] = s;

        // Candidate count is fixed by the ballot alone: all distinct
        // permutations of the truthful scores plus 2m single substitutions.
        std::map<std::string, int> mult;
        for (const Rat& s : truth) ++mult[rat_str(s)];
        mpz_class perms = factorial(m);
        for (const auto& [k, c] : mult) perms /= factorial(c);
        mpz_class bound = perms + 2 * m;
        if (bound > 200000)
            throw Error("CapExceeded", "find_manipulation: cardinal grid has " + bound.get_str() +
                                           " candidates (cap 200000)");

        Alloc truthful = rule(in, prof, tb);
        auto sum_sel = [&](const std::vector<int>& sel) {
            Rat s = 0;
            for (int p : sel) s += truth[p];
            return s;
        };
        Rat base = sum_sel(truthful.sel);
        Rat thr = base;
        if (approximate) {
            Rat extra = 0;
            for (int p = 0; p < m; ++p)
                if (!truthful.contains(p) && truth[p] > extra) extra = truth[p];
            thr += extra;
        }

        Rat maxscore = 0;
        for (const Rat& s : truth)
            if (s > maxscore) maxscore = s;

        auto key = [&](const std::vector<Rat>& dense) {
            std::vector<std::string> k;
            k.reserve(dense.size());
            for (const Rat& r : dense) k.push_back(rat_str(r));
            return k;
        };
        std::set<std::vector<std::string>> seen;
        seen.insert(key(truth));
        std::vector<std::vector<Rat>> cands;
        for (int j = 0; j < m; ++j) {
            for (const Rat& v : {Rat(0), maxscore}) {
                std::vector<Rat> d = truth;
                d[j] = v;
                if (seen.insert(key(d)).second) cands.push_back(std::move(d));
            }
        }
        {
            std::vector<Rat> d = truth;
            std::sort(d.begin(), d.end());
            do {
                if (seen.insert(key(d)).second) cands.push_back(d);
            } while (std::next_permutation(d.begin(), d.end()));
        }

        for (const std::vector<Rat>& dense : cands) {
            CardinalBallot cb;
            for (int p = 0; p < m; ++p)
                if (dense[p] != 0) cb.scores.emplace_back(p, dense[p]);
            Ballot b = cb;
            Alloc after = run(b);
            Rat va = sum_sel(after.sel);
            if (!(va > thr)) continue;

            Alloc again = run(b);
            bool good = again.sel == after.sel;
            if (good) {
                Rat va2 = 0;
                for (int p : again.sel) va2 += truth[p];
                for (int p = -1; p < m && good; ++p) {
                    if (p >= 0 && !approximate) break;
                    Rat alt = 0;
                    for (int q : truthful.sel) alt += truth[q];
                    if (p >= 0 && !truthful.contains(p)) alt += truth[p];
                    good = va2 > alt;
                }
            }
            if (!good)
                throw Error("WitnessMismatch",
                            "manipulation gain failed independent re-verification");
            std::string g = approximate
                                ? "score " + rat_str(va) + " beats " + rat_str(thr) +
                                      " (best truthful outcome plus one project)"
                                : "score " + rat_str(base) + " -> " + rat_str(va);
            return ManipulationFound{b, truthful, after, g};
        }
        return std::nullopt;
    }

    throw Error("WrongProfileVariant",
                "manipulation search supports approval and cardinal profiles");
}

Verdict check_weak_proportionality(const Instance& in, const Profile& prof, const Alloc& alloc) {
    Verdict v;
    v.axiom = "weak-proportionality";
    if (!in.unit_cost()) {
        v.status = VerdictStatus::Inapplicable;
        v.detail = "defined on unit-cost instances only";
        return v;
    }
    if (prof.kind() != BallotKind::Cardinal && prof.kind() != BallotKind::Approval)
        throw Error("WrongProfileVariant",
                    "weak proportionality needs a cardinal or approval profile");

    const int n = prof.n();
    std::vector<std::set<int>> supp(n);
    for (int i = 0; i < n; ++i) {
        if (prof.kind() == BallotKind::Approval) {
            for (int p : prof.approval(i).approved) supp[i].insert(p);
        } else {
            for (const auto& [p, s] : prof.cardinal(i).scores)
                if (s > 0) supp[i].insert(p);
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (supp[i] == supp[j]) continue;
            bool disjoint = true;
            for (int p : supp[i])
                if (supp[j].count(p)) {
                    disjoint = false;
                    break;
                }
            if (!disjoint) {
                v.status = VerdictStatus::Inapplicable;
                v.detail = "not a party-list profile: voters " + std::to_string(i + 1) + " and " +
                           std::to_string(j + 1) + " have distinct overlapping support sets";
                return v;
            }
        }
    }
    for (int p = 0; p < in.m(); ++p) {
        std::vector<int> who;
        for (int i = 0; i < n; ++i)
            if (supp[i].count(p)) who.push_back(i);
        if (Rat(static_cast<long>(who.size())) * in.budget() >= n && !alloc.contains(p)) {
            v.status = VerdictStatus::Violated;
            v.detail = "project " + in.id(p) + " has " + std::to_string(who.size()) + " of " +
                       std::to_string(n) + " voters behind it (threshold n/b) but is not selected";
            CohesiveWitness w;
            w.group = who;
            w.extra = p;
            v.witness = std::move(w);
            return v;
        }
    }
    v.status = VerdictStatus::Satisfied;
    v.detail = "every project with support at least n/b is selected";
    return v;
}

} // namespace pb
