#include "pb/axioms_fairness.hpp"

#include "pb/error.hpp"
#include "pb/lp.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace pb {
namespace {

constexpr int kHardCap = 20; // subset tables and 2^n scans stay bounded

void check_caps(const Instance& in, const Profile& prof, const EnumCaps& caps, const char* op) {
    int n = prof.n(), m = in.m();
    int cap_n = std::min(caps.max_n, kHardCap), cap_m = std::min(caps.max_m, kHardCap);
    if (n > cap_n || m > cap_m)
        throw Error("CapExceeded", std::string(op) + ": n=" + std::to_string(n) +
                                       " m=" + std::to_string(m) + " exceeds enumeration caps " +
                                       std::to_string(cap_n) + "x" + std::to_string(cap_m));
}

long ceil_rat(const Rat& q) {
    mpz_class z;
    mpz_cdiv_q(z.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return z.get_si();
}

long floor_rat(const Rat& q) {
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return z.get_si();
}

// Nonempty subsets of {0..m-1} as sorted index lists in lexicographic list
// order ([0], [0,1], [0,1,2], ..., [0,2], ..., [1], ...); f returns false to
// stop the whole walk.
bool subsets_rec(int m, int start, std::vector<int>& cur,
                 const std::function<bool(const std::vector<int>&)>& f) {
    for (int v = start; v < m; ++v) {
        cur.push_back(v);
        bool go = f(cur) && subsets_rec(m, v + 1, cur, f);
        cur.pop_back();
        if (!go) return false;
    }
    return true;
}

bool each_subset(int m, const std::function<bool(const std::vector<int>&)>& f) {
    std::vector<int> cur;
    return subsets_rec(m, 0, cur, f);
}

// Size-k subsets of pool (ascending values) in lexicographic order.
bool each_combo(const std::vector<int>& pool, int k,
                const std::function<bool(const std::vector<int>&)>& f) {
    int sz = static_cast<int>(pool.size());
    if (k <= 0 || k > sz) return true;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> combo(k);
    for (;;) {
        for (int j = 0; j < k; ++j) combo[j] = pool[idx[j]];
        if (!f(combo)) return false;
        int i = k - 1;
        while (i >= 0 && idx[i] == sz - k + i) --i;
        if (i < 0) return true;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Additive set function over mask bits with an optional precomputed table.
struct MaskSum {
    std::vector<Rat> w;
    std::vector<Rat> tab;

    void init(std::vector<Rat> weights) {
        w = std::move(weights);
        int m = static_cast<int>(w.size());
        if (m <= 16) {
            tab.assign(uint64_t(1) << m, Rat(0));
            for (uint64_t mask = 1; mask < tab.size(); ++mask) {
                uint64_t low = mask & (~mask + 1);
                tab[mask] = tab[mask ^ low] + w[std::countr_zero(low)];
            }
        }
    }

    Rat value(uint64_t mask) const {
        if (!tab.empty()) return tab[mask];
        Rat s = 0;
        while (mask) {
            uint64_t low = mask & (~mask + 1);
            s += w[std::countr_zero(low)];
            mask ^= low;
        }
        return s;
    }

    int cmp3(uint64_t a, uint64_t b) const {
        if (!tab.empty()) return cmp(tab[a], tab[b]);
        return cmp(value(a), value(b));
    }
};

// Satisfaction comparisons between masks. Every built-in function is either
// additive over projects or a strictly increasing transform of the cost sum
// (log, sqrt), so same-function comparisons reduce to comparing additive
// weight sums; CC compares by emptiness.
struct SetEval {
    bool cc = false;
    MaskSum sum;

    bool geq(uint64_t x, uint64_t thr) const {
        if (cc) return thr == 0 || x != 0;
        return sum.cmp3(x, thr) >= 0;
    }
    bool gt(uint64_t x, uint64_t thr) const {
        if (cc) return thr == 0 && x != 0;
        return sum.cmp3(x, thr) > 0;
    }
};

SetEval make_eval(const SatFn& sat, const Instance& in, const Profile& prof) {
    SetEval ev;
    if (sat.kind() == SatKind::CC) {
        ev.cc = true;
        return ev;
    }
    int m = in.m();
    std::vector<int> supp;
    if (sat.kind() == SatKind::Share) {
        supp.assign(m, 0);
        for (int i = 0; i < prof.n(); ++i)
            for (int p : prof.approval(i).approved) ++supp[p];
    }
    std::vector<Rat> w(m, Rat(0));
    for (int p = 0; p < m; ++p) {
        switch (sat.kind()) {
            case SatKind::Card: w[p] = 1; break;
            case SatKind::Cost: w[p] = in.cost(p); break;
            // log(1+c(P)) and sqrt(c(P)) are strictly increasing in c(P), so
            // comparing cost sums decides them exactly
            case SatKind::Log:
            case SatKind::Sqrt: w[p] = in.cost(p); break;
            case SatKind::Share:
                // zero-supporter projects never occur in any evaluated mask
                // (all queried masks sit inside some ballot or a bundle with a
                // nonempty supporter set)
                if (supp[p] > 0) w[p] = sat.singleton(in, p).stored();
                break;
            case SatKind::Additive: w[p] = sat.singleton(in, p).stored(); break;
            case SatKind::CC: break;
        }
    }
    ev.sum.init(std::move(w));
    return ev;
}

MaskSum make_cost_sum(const Instance& in) {
    std::vector<Rat> w(in.m());
    for (int p = 0; p < in.m(); ++p) w[p] = in.cost(p);
    MaskSum cs;
    cs.init(std::move(w));
    return cs;
}

// Smallest group size the share bound admits for a bundle of cost cP, or
// n+1 when no group can qualify.
long min_group_size(int n, const Rat& cP, const Rat& B) {
    if (B == 0) return n + 1;
    long s = ceil_rat(Rat(n) * cP / B);
    if (s < 1) s = 1;
    return s;
}

std::vector<Rat> dense_scores(const Instance& in, const Profile& prof, int i) {
    std::vector<Rat> row(in.m(), Rat(0));
    for (const auto& [p, s] : prof.cardinal(i).scores) row[p] = s;
    return row;
}

// Scores scaled to a common denominator as int64; fails on overflow risk.
bool build_int_scores(const Instance& in, const Profile& prof,
                      std::vector<std::vector<long long>>& u) {
    mpz_class L = 1;
    for (int i = 0; i < prof.n(); ++i)
        for (const auto& [p, s] : prof.cardinal(i).scores)
            mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), s.get_den().get_mpz_t());
    // sums run over at most m+1 terms; keep every term well clear of 2^63
    mpz_class lim = (mpz_class(1) << 62) / (in.m() + 1);
    u.assign(prof.n(), std::vector<long long>(in.m(), 0));
    for (int i = 0; i < prof.n(); ++i) {
        for (const auto& [p, s] : prof.cardinal(i).scores) {
            mpz_class v = s.get_num() * (L / s.get_den());
            if (v >= lim || !v.fits_slong_p()) return false;
            u[i][p] = v.get_si();
        }
    }
    return true;
}

struct ScanHit {
    CohesiveWitness w;
};

// ---- cardinal justified representation ----

template <class V>
std::optional<ScanHit> scan_jr_cardinal(const Instance& in, const Profile& prof, const Alloc& alloc,
                                        JrAxiom ax, const std::vector<std::vector<V>>& u,
                                        const Rat& B) {
    int n = prof.n(), m = in.m();
    uint64_t pimask = to_mask(alloc.sel);
    std::vector<V> satv(n, V(0));
    for (int i = 0; i < n; ++i)
        for (int p : alloc.sel) satv[i] += u[i][p];
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);

    std::optional<ScanHit> hit;
    each_subset(m, [&](const std::vector<int>& P) {
        Rat cP = 0;
        for (int p : P) cP += in.cost(p);
        long smin = min_group_size(n, cP, B);
        if (smin > n) return true;
        std::vector<int> pstars;
        for (int p : P)
            if (!(pimask >> p & 1)) pstars.push_back(p);

        // A violating group of size above the share minimum stays violating
        // after shrinking to that minimum (thresholds built from member minima
        // only grow, per-member failures persist), so scanning the minimum
        // size alone still yields the first witness under (size, lex) order.
        each_combo(all, static_cast<int>(smin), [&](const std::vector<int>& N) {
            V t(0);
            for (int p : P) {
                V mn = u[N[0]][p];
                for (size_t j = 1; j < N.size(); ++j) mn = std::min(mn, u[N[j]][p]);
                t += mn;
            }
            bool viol = false;
            switch (ax) {
                case JrAxiom::StrongEjr: {
                    for (int i : N)
                        if (satv[i] < t) { viol = true; break; }
                    break;
                }
                case JrAxiom::Ejr: {
                    viol = true;
                    for (int i : N)
                        if (satv[i] >= t) { viol = false; break; }
                    break;
                }
                case JrAxiom::Ejr1: {
                    viol = true;
                    for (int i : N) {
                        bool pass = satv[i] >= t;
                        for (size_t k = 0; !pass && k < pstars.size(); ++k)
                            pass = u[i][pstars[k]] + satv[i] > t;
                        if (pass) { viol = false; break; }
                    }
                    break;
                }
                case JrAxiom::Pjr:
                case JrAxiom::Pjr1: {
                    V lhs(0);
                    for (int p : alloc.sel) {
                        V mx = u[N[0]][p];
                        for (size_t j = 1; j < N.size(); ++j) mx = std::max(mx, u[N[j]][p]);
                        lhs += mx;
                    }
                    viol = lhs < t;
                    if (viol && ax == JrAxiom::Pjr1) {
                        for (int ps : pstars) {
                            V mx = u[N[0]][ps];
                            for (size_t j = 1; j < N.size(); ++j) mx = std::max(mx, u[N[j]][ps]);
                            if (mx + lhs > t) { viol = false; break; }
                        }
                    }
                    break;
                }
                case JrAxiom::Fjr: {
                    V beta = [&] {
                        V b0(0);
                        for (int p : P) b0 += u[N[0]][p];
                        for (size_t j = 1; j < N.size(); ++j) {
                            V bj(0);
                            for (int p : P) bj += u[N[j]][p];
                            b0 = std::min(b0, bj);
                        }
                        return b0;
                    }();
                    viol = true;
                    for (int i : N)
                        if (satv[i] >= beta) { viol = false; break; }
                    break;
                }
                default: break;
            }
            if (!viol) return true;
            CohesiveWitness w;
            w.group = N;
            w.bundle = P;
            for (int p : P) {
                Rat mn = prof.cardinal(N[0]).score(p);
                for (size_t j = 1; j < N.size(); ++j)
                    mn = std::min(mn, prof.cardinal(N[j]).score(p));
                w.alpha[p] = mn;
            }
            if (ax == JrAxiom::Fjr) {
                Rat beta;
                bool first = true;
                for (int i : N) {
                    Rat bi = 0;
                    for (int p : P) bi += prof.cardinal(i).score(p);
                    if (first || bi < beta) beta = bi;
                    first = false;
                }
                w.beta = beta;
            }
            hit = ScanHit{std::move(w)};
            return false;
        });
        return !hit;
    });
    return hit;
}

// ---- approval justified representation ----

std::optional<ScanHit> scan_jr_approval(const Instance& in, const Profile& prof, const Alloc& alloc,
                                        JrAxiom ax, const SetEval& ev, const MaskSum& costs,
                                        const Rat& B) {
    int n = prof.n(), m = in.m();
    uint64_t pimask = to_mask(alloc.sel);
    std::vector<uint64_t> A(n), won(n);
    for (int i = 0; i < n; ++i) {
        A[i] = prof.approval_mask(i);
        won[i] = A[i] & pimask;
    }
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);

    // max achievable value inside a unanimity set under a cost cap, memoized
    // per unanimity mask (Local-BPJR-L only)
    struct Stair {
        std::vector<Rat> cost;
        std::vector<Rat> best;
    };
    std::unordered_map<uint64_t, Stair> stairs;
    auto stair_of = [&](uint64_t U) -> const Stair& {
        auto it = stairs.find(U);
        if (it != stairs.end()) return it->second;
        std::vector<std::pair<Rat, Rat>> pts;
        uint64_t sub = U;
        for (;;) {
            pts.emplace_back(costs.value(sub), ev.sum.value(sub));
            if (sub == 0) break;
            sub = (sub - 1) & U;
        }
        std::sort(pts.begin(), pts.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        Stair st;
        Rat run = 0;
        for (auto& [c, v] : pts) {
            if (v > run) run = v;
            if (!st.cost.empty() && st.cost.back() == c) {
                st.best.back() = run;
            } else {
                st.cost.push_back(c);
                st.best.push_back(run);
            }
        }
        return stairs.emplace(U, std::move(st)).first->second;
    };
    auto stair_max = [&](const Stair& st, const Rat& cap) -> const Rat& {
        auto it = std::upper_bound(st.cost.begin(), st.cost.end(), cap);
        // cost 0 (empty set) is always present
        return st.best[static_cast<size_t>(it - st.cost.begin()) - 1];
    };

    std::optional<ScanHit> hit;
    each_subset(m, [&](const std::vector<int>& P) {
        uint64_t Pmask = to_mask(P);
        Rat cP = costs.value(Pmask);
        long smin = min_group_size(n, cP, B);
        if (smin > n) return true;

        std::vector<int> cand;
        if (ax == JrAxiom::Fjr) {
            cand = all; // no approval requirement on the deviating group
        } else {
            for (int i = 0; i < n; ++i)
                if ((A[i] & Pmask) == Pmask) cand.push_back(i);
        }
        if (static_cast<long>(cand.size()) < smin) return true;

        std::vector<int> pstars;
        for (int p : P)
            if (!(pimask >> p & 1)) pstars.push_back(p);

        // per-voter failure flags where the threshold does not depend on the
        // group, so one flag per candidate decides every group
        std::vector<char> fail(n, 0);
        bool per_member = ax == JrAxiom::StrongEjr || ax == JrAxiom::Ejr || ax == JrAxiom::Ejr1 ||
                          ax == JrAxiom::EjrX || ax == JrAxiom::Fjr;
        if (per_member) {
            for (int i : cand) {
                bool f;
                switch (ax) {
                    case JrAxiom::StrongEjr:
                    case JrAxiom::Ejr: f = !ev.geq(won[i], Pmask); break;
                    case JrAxiom::Ejr1: {
                        bool pass = ev.geq(won[i], Pmask);
                        for (size_t k = 0; !pass && k < pstars.size(); ++k)
                            pass = ev.gt(won[i] | (uint64_t(1) << pstars[k]), Pmask);
                        f = !pass;
                        break;
                    }
                    case JrAxiom::EjrX: {
                        bool pass = true; // vacuous when the bundle sits inside pi
                        for (int ps : pstars)
                            if (!ev.gt(won[i] | (uint64_t(1) << ps), Pmask)) { pass = false; break; }
                        f = !pass;
                        break;
                    }
                    case JrAxiom::Fjr: f = !ev.geq(won[i], Pmask & A[i]); break;
                    default: f = false; break;
                }
                fail[i] = f;
            }
            if (ax != JrAxiom::StrongEjr) {
                bool any_fail = false;
                for (int i : cand) any_fail |= fail[i];
                if (!any_fail) return true;
            }
        }

        // Local-BPJR-L is the one axiom where shrinking the group can repair
        // the violation (the unanimity set grows), so it scans every size.
        long size_lo = smin;
        long size_hi = ax == JrAxiom::LocalBpjrL ? static_cast<long>(cand.size()) : smin;
        for (long sz = size_lo; sz <= size_hi && !hit; ++sz) {
            each_combo(cand, static_cast<int>(sz), [&](const std::vector<int>& N) {
                bool viol = false;
                switch (ax) {
                    case JrAxiom::StrongEjr: {
                        for (int i : N)
                            if (fail[i]) { viol = true; break; }
                        break;
                    }
                    case JrAxiom::Ejr:
                    case JrAxiom::Ejr1:
                    case JrAxiom::EjrX:
                    case JrAxiom::Fjr: {
                        viol = true;
                        for (int i : N)
                            if (!fail[i]) { viol = false; break; }
                        break;
                    }
                    case JrAxiom::Pjr:
                    case JrAxiom::Pjr1:
                    case JrAxiom::PjrX: {
                        uint64_t U = 0;
                        for (int i : N) U |= won[i];
                        if (ax == JrAxiom::Pjr) {
                            viol = !ev.geq(U, Pmask);
                        } else if (ax == JrAxiom::Pjr1) {
                            viol = !ev.geq(U, Pmask);
                            for (size_t k = 0; viol && k < pstars.size(); ++k)
                                if (ev.gt(U | (uint64_t(1) << pstars[k]), Pmask)) viol = false;
                        } else {
                            for (int ps : pstars)
                                if (!ev.gt(U | (uint64_t(1) << ps), Pmask)) { viol = true; break; }
                        }
                        break;
                    }
                    case JrAxiom::LocalBpjrL: {
                        uint64_t W = 0, U = ~uint64_t(0);
                        for (int i : N) {
                            W |= won[i];
                            U &= A[i];
                        }
                        if ((W & ~Pmask) != 0 || W == Pmask) break; // need W strictly inside P
                        if (ev.cc) {
                            // some affordable nonempty subset of the unanimity
                            // set always exists (P itself), so the bundle is
                            // among the best
                            viol = true;
                        } else {
                            viol = stair_max(stair_of(U), cP) <= ev.sum.value(Pmask);
                        }
                        break;
                    }
                    default: break;
                }
                if (!viol) return true;
                CohesiveWitness w;
                w.group = N;
                w.bundle = P;
                if (ax == JrAxiom::LocalBpjrL) w.sub_bundle = P;
                hit = ScanHit{std::move(w)};
                return false;
            });
        }
        return !hit;
    });
    return hit;
}

// ---- cost-level representation (Strong-BPJR-L) ----

std::optional<ScanHit> scan_strong_bpjr(const Instance& in, const Profile& prof, const Alloc& alloc,
                                        const MaskSum& costs, const Rat& B) {
    int n = prof.n();
    uint64_t pimask = to_mask(alloc.sel);
    std::vector<uint64_t> A(n);
    for (int i = 0; i < n; ++i) A[i] = prof.approval_mask(i);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);

    std::optional<ScanHit> hit;
    for (int sz = 1; sz <= n && !hit; ++sz) {
        each_combo(all, sz, [&](const std::vector<int>& N) {
            uint64_t U = ~uint64_t(0), W = 0;
            for (int i : N) {
                U &= A[i];
                W |= A[i] & pimask;
            }
            U &= (uint64_t(1) << in.m()) - 1;
            Rat share = Rat(sz) * B / n;
            Rat hi = std::min(in.budget(), std::min(share, costs.value(U)));
            if (hi >= 1 && hi > costs.value(W)) {
                CohesiveWitness w;
                w.group = N;
                w.bundle = from_mask(U);
                w.level = hi; // largest level the group controls and covers
                hit = ScanHit{std::move(w)};
                return false;
            }
            return true;
        });
    }
    return hit;
}

std::string axiom_detail(JrAxiom ax, const std::optional<SatFn>& sat, BallotKind kind,
                         bool relative) {
    std::string d;
    if (kind == BallotKind::Cardinal) d = "cardinal scores";
    else if (ax == JrAxiom::StrongBpjrL) d = "cost levels";
    else d = std::string("sat=") + sat->name();
    if (relative) d += ", relative budget";
    return d;
}

// ---- core membership helpers ----

struct CoreScan {
    std::optional<CohesiveWitness> w;
};

CoreScan scan_core(const Instance& in, const Profile& prof, const Alloc& alloc, CoreMode mode,
                   const Rat& alpha, const std::optional<SatFn>& sat, const SetEval* ev,
                   const MaskSum& costs) {
    int n = prof.n(), m = in.m();
    uint64_t pimask = to_mask(alloc.sel);
    bool cardinal = prof.kind() == BallotKind::Cardinal;

    std::vector<std::vector<Rat>> u;
    std::vector<Rat> satv, extra;
    std::vector<uint64_t> A, won;
    std::vector<SatValue> thr_cache;
    if (cardinal) {
        u.reserve(n);
        for (int i = 0; i < n; ++i) u.push_back(dense_scores(in, prof, i));
        satv.assign(n, Rat(0));
        extra.assign(n, Rat(0));
        for (int i = 0; i < n; ++i) {
            for (int p : alloc.sel) satv[i] += u[i][p];
            for (int p = 0; p < m; ++p)
                if (!(pimask >> p & 1)) extra[i] = std::max(extra[i], u[i][p]);
        }
    } else {
        A.resize(n);
        won.resize(n);
        for (int i = 0; i < n; ++i) {
            A[i] = prof.approval_mask(i);
            won[i] = A[i] & pimask;
        }
    }

    CoreScan out;
    each_subset(m, [&](const std::vector<int>& P) {
        uint64_t Pmask = to_mask(P);
        Rat cP = costs.value(Pmask);
        Rat scale = mode == CoreMode::EntitlementApprox ? alpha : Rat(1);
        long smin = in.budget() == 0 ? n + 1 : ceil_rat(scale * n * cP / in.budget());
        if (smin < 1) smin = 1;
        if (smin > n) return true;

        std::vector<int> fails;
        for (int i = 0; i < n; ++i) {
            bool f;
            if (cardinal) {
                Rat interest = 0;
                for (int p : P) interest += u[i][p];
                if (mode == CoreMode::SatApprox) f = alpha * (satv[i] + extra[i]) < interest;
                else f = satv[i] < interest;
            } else if (mode != CoreMode::SatApprox) {
                f = !ev->geq(won[i], Pmask & A[i]);
            } else {
                // one extra project, drawn from the whole project set
                SatValue thr = sat->of_set(in, from_mask(Pmask & A[i]));
                bool pass = false;
                for (int ps = 0; ps < m && !pass; ++ps) {
                    uint64_t got = won[i] | ((uint64_t(1) << ps) & A[i]);
                    pass = SatValue::lin(alpha) * sat->of_set(in, from_mask(got)) >= thr;
                }
                f = !pass;
            }
            if (f) fails.push_back(i);
            if (static_cast<long>(fails.size()) >= smin) break;
        }
        if (static_cast<long>(fails.size()) < smin) return true;
        CohesiveWitness w;
        w.group.assign(fails.begin(), fails.begin() + smin);
        w.bundle = P;
        out.w = std::move(w);
        return false;
    });
    return out;
}

const char* core_name(CoreMode mode) {
    switch (mode) {
        case CoreMode::Exact: return "core";
        case CoreMode::SatApprox: return "core-sat-approx";
        default: return "core-entitlement";
    }
}

// ---- price systems ----

bool supports(const Profile& prof, int i, int p) {
    if (prof.kind() == BallotKind::Approval) return prof.approval(i).approves(p);
    return prof.cardinal(i).score(p) > 0;
}

PriceSystem extract_system(const std::vector<Rat>& x, int n,
                           const std::vector<std::map<int, int>>& var_of) {
    PriceSystem ps;
    ps.alpha = x[0];
    ps.gamma.assign(n, {});
    for (int i = 0; i < n; ++i)
        for (const auto& [p, v] : var_of[i])
            if (x[v] != 0) ps.gamma[i][p] = x[v];
    return ps;
}

} // namespace

const char* jr_axiom_name(JrAxiom a) {
    switch (a) {
        case JrAxiom::StrongEjr: return "strong-ejr";
        case JrAxiom::Ejr: return "ejr";
        case JrAxiom::Ejr1: return "ejr1";
        case JrAxiom::EjrX: return "ejrx";
        case JrAxiom::Pjr: return "pjr";
        case JrAxiom::Pjr1: return "pjr1";
        case JrAxiom::PjrX: return "pjrx";
        case JrAxiom::LocalBpjrL: return "local-bpjr-l";
        case JrAxiom::StrongBpjrL: return "strong-bpjr-l";
        case JrAxiom::Fjr: return "fjr";
    }
    return "?";
}

std::optional<JrAxiom> jr_axiom_by_name(const std::string& name) {
    for (JrAxiom a :
         {JrAxiom::StrongEjr, JrAxiom::Ejr, JrAxiom::Ejr1, JrAxiom::EjrX, JrAxiom::Pjr,
          JrAxiom::Pjr1, JrAxiom::PjrX, JrAxiom::LocalBpjrL, JrAxiom::StrongBpjrL, JrAxiom::Fjr})
        if (name == jr_axiom_name(a)) return a;
    return std::nullopt;
}

Verdict check_jr(const Instance& in, const Profile& prof, const Alloc& alloc, JrAxiom axiom,
                 const std::optional<SatFn>& sat, bool relative_budget, const EnumCaps& caps) {
    check_caps(in, prof, caps, "check_jr");
    Rat B = relative_budget ? alloc.total : in.budget();

    std::optional<ScanHit> hit;
    if (prof.kind() == BallotKind::Cardinal) {
        if (axiom == JrAxiom::EjrX || axiom == JrAxiom::PjrX || axiom == JrAxiom::LocalBpjrL ||
            axiom == JrAxiom::StrongBpjrL)
            throw Error("WrongProfileVariant", std::string(jr_axiom_name(axiom)) +
                                                   " is defined for approval ballots only");
        std::vector<std::vector<long long>> ui;
        if (build_int_scores(in, prof, ui)) {
            hit = scan_jr_cardinal<long long>(in, prof, alloc, axiom, ui, B);
        } else {
            std::vector<std::vector<Rat>> ur;
            ur.reserve(prof.n());
            for (int i = 0; i < prof.n(); ++i) ur.push_back(dense_scores(in, prof, i));
            hit = scan_jr_cardinal<Rat>(in, prof, alloc, axiom, ur, B);
        }
    } else if (prof.kind() == BallotKind::Approval) {
        MaskSum costs = make_cost_sum(in);
        if (axiom == JrAxiom::StrongBpjrL) {
            hit = scan_strong_bpjr(in, prof, alloc, costs, B);
        } else {
            if (!sat)
                throw Error("MissingSatisfaction", std::string(jr_axiom_name(axiom)) +
                                                       " on approval ballots needs a satisfaction "
                                                       "function");
            SetEval ev = make_eval(*sat, in, prof);
            hit = scan_jr_approval(in, prof, alloc, axiom, ev, costs, B);
        }
    } else {
        throw Error("WrongProfileVariant",
                    std::string("check_jr expects cardinal or approval ballots, got ") +
                        kind_name(prof.kind()));
    }

    Verdict v;
    v.axiom = jr_axiom_name(axiom);
    v.detail = axiom_detail(axiom, sat, prof.kind(), relative_budget);
    if (hit) {
        if (!verify_jr_witness(in, prof, alloc, axiom, sat, relative_budget, hit->w))
            throw Error("WitnessMismatch", "enumerated witness failed definitional recheck");
        v.status = VerdictStatus::Violated;
        v.witness = std::move(hit->w);
    }
    return v;
}

Verdict check_core(const Instance& in, const Profile& prof, const Alloc& alloc, CoreMode mode,
                   const Rat& alpha, const std::optional<SatFn>& sat, const EnumCaps& caps) {
    check_caps(in, prof, caps, "check_core");
    if (mode != CoreMode::Exact && alpha <= 0)
        throw Error("BadAlpha", "approximation factor must be positive");

    std::optional<SetEval> ev;
    if (prof.kind() == BallotKind::Approval) {
        if (!sat)
            throw Error("MissingSatisfaction",
                        "core on approval ballots needs a satisfaction function");
        ev = make_eval(*sat, in, prof);
    } else if (prof.kind() != BallotKind::Cardinal) {
        throw Error("WrongProfileVariant",
                    std::string("check_core expects cardinal or approval ballots, got ") +
                        kind_name(prof.kind()));
    }

    MaskSum costs = make_cost_sum(in);
    CoreScan scan =
        scan_core(in, prof, alloc, mode, alpha, sat, ev ? &*ev : nullptr, costs);

    Verdict v;
    v.axiom = core_name(mode);
    v.detail = prof.kind() == BallotKind::Cardinal ? "cardinal scores"
                                                   : std::string("sat=") + sat->name();
    if (mode != CoreMode::Exact) v.detail += ", alpha=" + rat_str(alpha);
    if (scan.w) {
        if (!verify_core_witness(in, prof, alloc, mode, alpha, sat, *scan.w))
            throw Error("WitnessMismatch", "enumerated witness failed definitional recheck");
        v.status = VerdictStatus::Violated;
        v.witness = std::move(scan.w);
    }
    return v;
}

Rat audit_core_entitlement(const Instance& in, const Profile& prof, const Alloc& alloc,
                           const std::optional<SatFn>& sat, const EnumCaps& caps) {
    check_caps(in, prof, caps, "audit_core_entitlement");
    int n = prof.n(), m = in.m();
    uint64_t pimask = to_mask(alloc.sel);
    bool cardinal = prof.kind() == BallotKind::Cardinal;
    std::optional<SetEval> ev;
    std::vector<std::vector<Rat>> u;
    std::vector<Rat> satv;
    std::vector<uint64_t> A, won;
    if (cardinal) {
        u.reserve(n);
        for (int i = 0; i < n; ++i) u.push_back(dense_scores(in, prof, i));
        satv.assign(n, Rat(0));
        for (int i = 0; i < n; ++i)
            for (int p : alloc.sel) satv[i] += u[i][p];
    } else if (prof.kind() == BallotKind::Approval) {
        if (!sat)
            throw Error("MissingSatisfaction",
                        "core audit on approval ballots needs a satisfaction function");
        ev = make_eval(*sat, in, prof);
        A.resize(n);
        won.resize(n);
        for (int i = 0; i < n; ++i) {
            A[i] = prof.approval_mask(i);
            won[i] = A[i] & pimask;
        }
    } else {
        throw Error("WrongProfileVariant",
                    std::string("core audit expects cardinal or approval ballots, got ") +
                        kind_name(prof.kind()));
    }
    MaskSum costs = make_cost_sum(in);

    // the tightest entitlement bound any improving deviation meets; the whole
    // failing set maximizes |N| for its bundle
    Rat best = 0;
    each_subset(m, [&](const std::vector<int>& P) {
        uint64_t Pmask = to_mask(P);
        long cnt = 0;
        for (int i = 0; i < n; ++i) {
            bool f;
            if (cardinal) {
                Rat interest = 0;
                for (int p : P) interest += u[i][p];
                f = satv[i] < interest;
            } else {
                f = !ev->geq(won[i], Pmask & A[i]);
            }
            if (f) ++cnt;
        }
        if (cnt > 0) {
            Rat ratio = Rat(cnt) * in.budget() / (Rat(n) * costs.value(Pmask));
            if (ratio > best) best = ratio;
        }
        return true;
    });
    return best;
}

PriceVerdict check_priceable(const Instance& in, const Profile& prof, const Alloc& alloc,
                             PriceStrength strength) {
    if (prof.kind() != BallotKind::Cardinal && prof.kind() != BallotKind::Approval)
        throw Error("WrongProfileVariant",
                    std::string("price systems need cardinal or approval ballots, got ") +
                        kind_name(prof.kind()));
    int n = prof.n(), m = in.m();

    // var 0: the per-voter entitlement; then one payment var per (voter,
    // selected project they support), folding C1 and C2 into the layout
    std::vector<std::map<int, int>> var_of(n);
    int nv = 1;
    for (int i = 0; i < n; ++i)
        for (int p : alloc.sel)
            if (supports(prof, i, p)) var_of[i][p] = nv++;

    std::vector<LpConstraint> cons;
    // selected projects are exactly funded
    for (int p : alloc.sel) {
        LpConstraint c;
        for (int i = 0; i < n; ++i) {
            auto it = var_of[i].find(p);
            if (it != var_of[i].end()) c.coef.emplace_back(it->second, Rat(1));
        }
        c.sense = LpSense::Eq;
        c.rhs = in.cost(p);
        cons.push_back(std::move(c));
    }
    // payments stay within the entitlement
    for (int i = 0; i < n; ++i) {
        if (var_of[i].empty()) continue;
        LpConstraint c;
        for (const auto& [p, v] : var_of[i]) c.coef.emplace_back(v, Rat(1));
        c.coef.emplace_back(0, Rat(-1));
        c.sense = LpSense::Le;
        c.rhs = 0;
        cons.push_back(std::move(c));
    }
    // supporters of an unselected project cannot jointly afford it
    std::vector<std::vector<int>> supp_out(m);
    for (int p = 0; p < m; ++p) {
        if (alloc.contains(p)) continue;
        for (int i = 0; i < n; ++i)
            if (supports(prof, i, p)) supp_out[p].push_back(i);
        if (supp_out[p].empty()) continue;
        LpConstraint c;
        c.coef.emplace_back(0, Rat(static_cast<long>(supp_out[p].size())));
        for (int i : supp_out[p])
            for (const auto& [q, v] : var_of[i]) c.coef.emplace_back(v, Rat(-1));
        c.sense = LpSense::Le;
        c.rhs = in.cost(p);
        cons.push_back(std::move(c));
    }
    if (strength == PriceStrength::C6AndAlphaGtB) {
        // no unselected project's supporters jointly cover a selected one
        for (int p = 0; p < m; ++p) {
            if (alloc.contains(p) || supp_out[p].empty()) continue;
            for (int q : alloc.sel) {
                LpConstraint c;
                for (int i : supp_out[p]) {
                    auto it = var_of[i].find(q);
                    if (it != var_of[i].end()) c.coef.emplace_back(it->second, Rat(1));
                }
                if (c.coef.empty()) continue;
                c.sense = LpSense::Le;
                c.rhs = in.cost(p);
                cons.push_back(std::move(c));
            }
        }
    }

    PriceVerdict out;
    if (strength == PriceStrength::None) {
        // canonical system: smallest entitlement that funds the allocation
        LpResult r = lp_min(nv, {{0, Rat(1)}}, cons);
        if (!r.feasible) {
            out.detail = "no price system funds the allocation";
            return out;
        }
        out.priceable = true;
        out.system = extract_system(r.x, n, var_of);
        out.detail = "minimal entitlement " + rat_str(r.x[0]);
    } else {
        LpResult r = lp_max(nv, {{0, Rat(1)}}, cons);
        if (!r.feasible) {
            out.detail = "no price system funds the allocation";
            return out;
        }
        bool above = r.unbounded || r.objective > in.budget();
        if (!above) {
            out.detail = "entitlement capped at " + rat_str(r.objective) +
                         ", not above budget " + rat_str(in.budget());
            return out;
        }
        if (r.unbounded) {
            // pin a concrete witness above the budget
            LpConstraint pin;
            pin.coef.emplace_back(0, Rat(1));
            pin.sense = LpSense::Ge;
            pin.rhs = in.budget() + 1;
            cons.push_back(std::move(pin));
            r = lp_min(nv, {{0, Rat(1)}}, cons);
            if (!r.feasible) throw Error("WitnessMismatch", "unbounded entitlement lost on repin");
        }
        out.priceable = true;
        out.system = extract_system(r.x, n, var_of);
        out.detail = "entitlement " + rat_str(out.system->alpha) + " above budget";
    }
    std::string why;
    if (!validate_price_system(in, prof, alloc, *out.system, strength, &why))
        throw Error("WitnessMismatch", "price system failed validation: " + why);
    return out;
}

bool validate_price_system(const Instance& in, const Profile& prof, const Alloc& alloc,
                           const PriceSystem& ps, PriceStrength strength, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    int n = prof.n(), m = in.m();
    if (static_cast<int>(ps.gamma.size()) != n) return fail("one payment map per voter required");
    if (ps.alpha < 0) return fail("negative entitlement");
    std::vector<Rat> spent(n, Rat(0));
    for (int i = 0; i < n; ++i) {
        for (const auto& [p, g] : ps.gamma[i]) {
            if (p < 0 || p >= m) return fail("payment to unknown project");
            if (g < 0) return fail("negative payment");
            if (g == 0) continue;
            if (!supports(prof, i, p)) return fail("C1: payment without support");
            if (!alloc.contains(p)) return fail("C2: payment to unselected project");
            spent[i] += g;
        }
        if (spent[i] > ps.alpha) return fail("C3: payments exceed entitlement");
    }
    for (int p : alloc.sel) {
        Rat got = 0;
        for (int i = 0; i < n; ++i) {
            auto it = ps.gamma[i].find(p);
            if (it != ps.gamma[i].end()) got += it->second;
        }
        if (got != in.cost(p)) return fail("C4: selected project not exactly funded");
    }
    for (int p = 0; p < m; ++p) {
        if (alloc.contains(p)) continue;
        Rat slack = 0;
        bool any = false;
        for (int i = 0; i < n; ++i)
            if (supports(prof, i, p)) {
                slack += ps.alpha - spent[i];
                any = true;
            }
        if (any && slack > in.cost(p)) return fail("C5: supporters keep enough to fund");
        if (strength == PriceStrength::C6AndAlphaGtB) {
            for (int q : alloc.sel) {
                Rat moved = 0;
                for (int i = 0; i < n; ++i)
                    if (supports(prof, i, p)) {
                        auto it = ps.gamma[i].find(q);
                        if (it != ps.gamma[i].end()) moved += it->second;
                    }
                if (moved > in.cost(p)) return fail("C6: supporters could redirect payments");
            }
        }
    }
    if (strength != PriceStrength::None && !(ps.alpha > in.budget()))
        return fail("entitlement not above the budget limit");
    return true;
}

Verdict check_fair_share(const Instance& in, const Profile& prof, const Alloc& alloc) {
    if (prof.kind() != BallotKind::Approval)
        throw Error("WrongProfileVariant",
                    std::string("fair share expects approval ballots, got ") +
                        kind_name(prof.kind()));
    int n = prof.n();
    std::vector<int> supp(in.m(), 0);
    for (int i = 0; i < n; ++i)
        for (int p : prof.approval(i).approved) ++supp[p];

    Verdict v;
    v.axiom = "fair-share";
    v.detail = "equal cost split among supporters";
    for (int i = 0; i < n; ++i) {
        Rat got = 0, all = 0;
        for (int p : prof.approval(i).approved) {
            Rat piece = in.cost(p) / supp[p];
            all += piece;
            if (alloc.contains(p)) got += piece;
        }
        Rat due = std::min(Rat(in.budget() / n), all);
        if (got < due) {
            CohesiveWitness w;
            w.group = {i};
            v.status = VerdictStatus::Violated;
            v.witness = std::move(w);
            v.detail = "voter " + std::to_string(i) + " receives " + rat_str(got) +
                       " of entitled " + rat_str(due);
            break;
        }
    }
    return v;
}

namespace {

// class index per project, best class 0; unranked projects share one bottom
// class
std::vector<std::vector<int>> voter_classes(const Instance& in, const Profile& prof, int i) {
    std::vector<std::vector<int>> cls;
    if (prof.kind() == BallotKind::Ordinal) {
        for (int p : prof.ordinal(i).ranking) cls.push_back({p});
    } else {
        cls = prof.weak_ordinal(i).classes;
    }
    std::vector<char> seen(in.m(), 0);
    for (const auto& c : cls)
        for (int p : c) seen[p] = 1;
    std::vector<int> rest;
    for (int p = 0; p < in.m(); ++p)
        if (!seen[p]) rest.push_back(p);
    if (!rest.empty()) cls.push_back(std::move(rest));
    return cls;
}

} // namespace

Verdict check_psc(const Instance& in, const Profile& prof, const Alloc& alloc, PscVariant variant,
                  const EnumCaps& caps) {
    check_caps(in, prof, caps, "check_psc");
    int n = prof.n(), m = in.m();
    uint64_t pimask = to_mask(alloc.sel);
    MaskSum costs = make_cost_sum(in);
    Verdict v;
    v.axiom = variant == PscVariant::Cpsc ? "cpsc" : "ipsc";

    if (prof.kind() == BallotKind::Approval) {
        if (variant == PscVariant::Cpsc) {
            // approval reading: proportionality up to cost levels plus a
            // maximal-cost allocation
            Verdict pjr = check_jr(in, prof, alloc, JrAxiom::Pjr, SatFn::cost(), false, caps);
            if (pjr.status == VerdictStatus::Violated) {
                v.status = VerdictStatus::Violated;
                v.witness = std::move(pjr.witness);
                v.detail = "cost proportionality violated";
                return v;
            }
            Rat best = 0;
            for (uint64_t mask = 0; mask < (uint64_t(1) << m); ++mask) {
                Rat c = costs.value(mask);
                if (c <= in.budget() && c > best) best = c;
            }
            if (alloc.total < best) {
                each_subset(m, [&](const std::vector<int>& P) {
                    Rat c = 0;
                    for (int p : P) c += in.cost(p);
                    if (c == best) {
                        CohesiveWitness w;
                        w.bundle = P;
                        v.witness = std::move(w);
                        return false;
                    }
                    return true;
                });
                v.status = VerdictStatus::Violated;
                v.detail =
                    "allocation cost " + rat_str(alloc.total) + " below achievable " + rat_str(best);
                return v;
            }
            v.detail = "cost proportionality and maximal cost";
            return v;
        }
        // IPSC approval reading: no group is owed an affordable commonly
        // approved project, and the allocation is exhaustive
        std::vector<uint64_t> A(n);
        for (int i = 0; i < n; ++i) A[i] = prof.approval_mask(i);
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        for (int sz = 1; sz <= n; ++sz) {
            bool stopped = !each_combo(all, sz, [&](const std::vector<int>& N) {
                uint64_t W = 0, common = ~uint64_t(0);
                for (int i : N) {
                    W |= A[i] & pimask;
                    common &= A[i] & ~pimask;
                }
                common &= (uint64_t(1) << m) - 1;
                Rat share = Rat(sz) * in.budget() / n;
                Rat cW = costs.value(W);
                if (cW >= share) return true;
                for (int p = 0; p < m; ++p)
                    if (common >> p & 1 && cW + in.cost(p) <= share) {
                        CohesiveWitness w;
                        w.group = N;
                        w.extra = p;
                        v.witness = std::move(w);
                        v.detail = "group can still afford a commonly approved project";
                        return false;
                    }
                return true;
            });
            if (stopped) {
                v.status = VerdictStatus::Violated;
                return v;
            }
        }
        for (int p = 0; p < m; ++p)
            if (!alloc.contains(p) && alloc.total + in.cost(p) <= in.budget()) {
                CohesiveWitness w;
                w.extra = p;
                v.status = VerdictStatus::Violated;
                v.witness = std::move(w);
                v.detail = "allocation not exhaustive";
                return v;
            }
        v.detail = "group condition and exhaustiveness";
        return v;
    }

    if (prof.kind() != BallotKind::Ordinal && prof.kind() != BallotKind::WeakOrdinal)
        throw Error("WrongProfileVariant",
                    std::string("solid coalition axioms expect ordinal or approval ballots, got ") +
                        kind_name(prof.kind()));

    // rank index per voter and project, prefix masks per count
    std::vector<std::vector<int>> rank(n, std::vector<int>(m, 0));
    std::vector<std::vector<uint64_t>> topmask(n, std::vector<uint64_t>(m + 1, 0));
    for (int i = 0; i < n; ++i) {
        auto cls = voter_classes(in, prof, i);
        for (size_t c = 0; c < cls.size(); ++c)
            for (int p : cls[c]) rank[i][p] = static_cast<int>(c);
        for (int k = 1; k <= m; ++k) {
            uint64_t mask = 0;
            int cnt = 0;
            for (const auto& c : cls) {
                if (cnt >= k) break; // classes are added while the count is short of k
                for (int p : c) mask |= uint64_t(1) << p;
                cnt += static_cast<int>(c.size());
            }
            topmask[i][k] = mask;
        }
    }

    std::optional<CohesiveWitness> found;
    std::string detail;
    each_subset(m, [&](const std::vector<int>& P) {
        uint64_t Pmask = to_mask(P);
        int kP = static_cast<int>(P.size());
        // solid: every bundle member is weakly preferred to every outsider
        std::vector<int> solid;
        for (int i = 0; i < n; ++i) {
            int worst_in = 0, best_out = m + 1;
            for (int p = 0; p < m; ++p) {
                if (Pmask >> p & 1) worst_in = std::max(worst_in, rank[i][p]);
                else best_out = std::min(best_out, rank[i][p]);
            }
            if (worst_in <= best_out) solid.push_back(i);
        }
        if (solid.empty()) return true;

        std::vector<Rat> subcost; // achievable costs of sub-bundles
        if (variant == PscVariant::Cpsc) {
            uint64_t sub = Pmask;
            for (;;) {
                subcost.push_back(costs.value(sub));
                if (sub == 0) break;
                sub = (sub - 1) & Pmask;
            }
            std::sort(subcost.begin(), subcost.end());
        }

        for (int sz = 1; sz <= static_cast<int>(solid.size()) && !found; ++sz) {
            each_combo(solid, sz, [&](const std::vector<int>& N) {
                uint64_t T = 0;
                for (int i : N) T |= topmask[i][kP];
                T &= pimask;
                Rat cT = costs.value(T);
                Rat share = Rat(sz) * in.budget() / n;
                if (variant == PscVariant::Cpsc) {
                    auto it = std::upper_bound(subcost.begin(), subcost.end(), share);
                    if (it == subcost.begin() || *std::prev(it) <= cT) return true;
                    each_subset(kP, [&](const std::vector<int>& kidx) {
                        Rat c = 0;
                        for (int k : kidx) c += in.cost(P[k]);
                        if (c > cT && c <= share) {
                            CohesiveWitness w;
                            w.group = N;
                            w.bundle = P;
                            for (int k : kidx) w.sub_bundle.push_back(P[k]);
                            found = std::move(w);
                            return false;
                        }
                        return true;
                    });
                    detail = "coalition's top projects fall short of an affordable sub-bundle";
                    return false;
                }
                for (int p : P)
                    if (!(T >> p & 1) && cT + in.cost(p) <= share) {
                        CohesiveWitness w;
                        w.group = N;
                        w.bundle = P;
                        w.extra = p;
                        found = std::move(w);
                        detail = "coalition can still afford a top-ranked project";
                        return false;
                    }
                return true;
            });
        }
        return !found;
    });
    if (found) {
        v.status = VerdictStatus::Violated;
        v.witness = std::move(found);
        v.detail = detail;
    } else {
        v.detail = "solid coalition enumeration";
    }
    return v;
}

Verdict check_cumulative_pr(const Instance& in, const Profile& prof, const Alloc& alloc,
                            const EnumCaps& caps) {
    check_caps(in, prof, caps, "check_cumulative_pr");
    if (prof.kind() != BallotKind::Cumulative)
        throw Error("WrongProfileVariant",
                    std::string("cumulative proportionality expects cumulative ballots, got ") +
                        kind_name(prof.kind()));
    if (in.budget().get_den() != 1 || in.budget() < 1)
        throw Error("NonIntegerBudget",
                    "cumulative proportionality needs a positive integer budget");
    int n = prof.n(), m = in.m();
    uint64_t pimask = to_mask(alloc.sel);
    long b = in.budget().get_num().get_si();

    std::vector<uint64_t> pos(n, 0); // projects a voter weights positively
    for (int i = 0; i < n; ++i)
        for (const auto& [p, wt] : prof.cumulative(i).weights)
            if (wt > 0) pos[i] |= uint64_t(1) << p;

    // per-bundle data in bundle enumeration order
    struct BundleRow {
        std::vector<int> P;
        uint64_t insiders;  // voters positive on all of the bundle
        uint64_t blocked;   // voters positive somewhere outside (must join N)
        long lo;            // smallest level covering the bundle cost
        bool outside_pi;
    };
    std::vector<BundleRow> rows;
    each_subset(m, [&](const std::vector<int>& P) {
        BundleRow r;
        r.P = P;
        uint64_t Pmask = to_mask(P);
        r.insiders = 0;
        r.blocked = 0;
        for (int i = 0; i < n; ++i) {
            if ((pos[i] & Pmask) == Pmask) r.insiders |= uint64_t(1) << i;
            if (pos[i] & ~Pmask) r.blocked |= uint64_t(1) << i;
        }
        Rat cP = 0;
        for (int p : P) cP += in.cost(p);
        r.lo = std::max(1l, ceil_rat(cP));
        r.outside_pi = (Pmask & ~pimask) != 0;
        rows.push_back(std::move(r));
        return true;
    });

    std::vector<long> cap_floor(n + 1, 0);
    for (int sz = 1; sz <= n; ++sz) cap_floor[sz] = floor_rat(Rat(sz) * in.budget() / n);

    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    Verdict v;
    v.axiom = "cumulative-pr";
    v.detail = "integer budget levels";
    for (int sz = 1; sz <= n && v.status == VerdictStatus::Satisfied; ++sz) {
        long hi = std::min(b, cap_floor[sz]);
        if (hi < 1) continue;
        each_combo(all, sz, [&](const std::vector<int>& N) {
            uint64_t Nmask = 0;
            for (int i : N) Nmask |= uint64_t(1) << i;
            for (const BundleRow& r : rows) {
                if (!r.outside_pi || r.lo > hi) continue;
                if ((r.blocked & ~Nmask) || (Nmask & ~r.insiders)) continue;
                CohesiveWitness w;
                w.group = N;
                w.bundle = r.P;
                w.level = Rat(r.lo); // smallest level that certifies the claim
                v.status = VerdictStatus::Violated;
                v.witness = std::move(w);
                v.detail = "bundle owed at level " + std::to_string(r.lo) + " not fully selected";
                return false;
            }
            return true;
        });
    }
    return v;
}

// ---- independent witness rechecks ----

namespace {

bool valid_group(int n, const std::vector<int>& g) {
    if (g.empty()) return false;
    for (size_t j = 0; j < g.size(); ++j) {
        if (g[j] < 0 || g[j] >= n) return false;
        if (j && g[j] <= g[j - 1]) return false;
    }
    return true;
}

bool valid_bundle(int m, const std::vector<int>& b) {
    if (b.empty()) return false;
    for (size_t j = 0; j < b.size(); ++j) {
        if (b[j] < 0 || b[j] >= m) return false;
        if (j && b[j] <= b[j - 1]) return false;
    }
    return true;
}

Rat cost_of(const Instance& in, const std::vector<int>& P) {
    Rat c = 0;
    for (int p : P) c += in.cost(p);
    return c;
}

std::vector<int> inter_sorted(const std::vector<int>& a, uint64_t mask) {
    std::vector<int> r;
    for (int p : a)
        if (mask >> p & 1) r.push_back(p);
    return r;
}

} // namespace

bool verify_jr_witness(const Instance& in, const Profile& prof, const Alloc& alloc, JrAxiom axiom,
                       const std::optional<SatFn>& sat, bool relative_budget,
                       const CohesiveWitness& w) {
    int n = prof.n(), m = in.m();
    Rat B = relative_budget ? alloc.total : in.budget();
    if (!valid_group(n, w.group)) return false;
    uint64_t pimask = to_mask(alloc.sel);

    if (prof.kind() == BallotKind::Cardinal) {
        if (!valid_bundle(m, w.bundle)) return false;
        Rat cP = cost_of(in, w.bundle);
        if (Rat(static_cast<long>(w.group.size())) * B < Rat(n) * cP) return false;
        auto score = [&](int i, int p) { return prof.cardinal(i).score(p); };
        auto sat_of = [&](int i) {
            Rat s = 0;
            for (int p : alloc.sel) s += score(i, p);
            return s;
        };
        Rat t = 0;
        for (int p : w.bundle) {
            Rat mn = score(w.group[0], p);
            for (size_t j = 1; j < w.group.size(); ++j) mn = std::min(mn, score(w.group[j], p));
            t += mn;
        }
        std::vector<int> pstars;
        for (int p : w.bundle)
            if (!(pimask >> p & 1)) pstars.push_back(p);
        switch (axiom) {
            case JrAxiom::StrongEjr: {
                for (int i : w.group)
                    if (sat_of(i) < t) return true;
                return false;
            }
            case JrAxiom::Ejr: {
                for (int i : w.group)
                    if (sat_of(i) >= t) return false;
                return true;
            }
            case JrAxiom::Ejr1: {
                for (int i : w.group) {
                    Rat s = sat_of(i);
                    if (s >= t) return false;
                    for (int ps : pstars)
                        if (score(i, ps) + s > t) return false;
                }
                return true;
            }
            case JrAxiom::Pjr:
            case JrAxiom::Pjr1: {
                Rat lhs = 0;
                for (int p : alloc.sel) {
                    Rat mx = score(w.group[0], p);
                    for (size_t j = 1; j < w.group.size(); ++j)
                        mx = std::max(mx, score(w.group[j], p));
                    lhs += mx;
                }
                if (lhs >= t) return false;
                if (axiom == JrAxiom::Pjr1)
                    for (int ps : pstars) {
                        Rat mx = score(w.group[0], ps);
                        for (size_t j = 1; j < w.group.size(); ++j)
                            mx = std::max(mx, score(w.group[j], ps));
                        if (mx + lhs > t) return false;
                    }
                return true;
            }
            case JrAxiom::Fjr: {
                Rat beta;
                bool first = true;
                for (int i : w.group) {
                    Rat bi = 0;
                    for (int p : w.bundle) bi += score(i, p);
                    if (first || bi < beta) beta = bi;
                    first = false;
                }
                for (int i : w.group)
                    if (sat_of(i) >= beta) return false;
                return true;
            }
            default: return false;
        }
    }

    if (prof.kind() != BallotKind::Approval) return false;
    auto sval = [&](const std::vector<int>& P) { return sat->of_set(in, P); };
    auto won_of = [&](int i) {
        return inter_sorted(prof.approval(i).approved, pimask);
    };

    if (axiom == JrAxiom::StrongBpjrL) {
        if (!w.level) return false;
        Rat l = *w.level;
        if (l < 1 || l > in.budget()) return false;
        if (Rat(static_cast<long>(w.group.size())) * B < Rat(n) * l) return false;
        uint64_t U = ~uint64_t(0), W = 0;
        for (int i : w.group) {
            U &= prof.approval_mask(i);
            W |= prof.approval_mask(i) & pimask;
        }
        U &= (uint64_t(1) << m) - 1;
        Rat cU = 0, cW = 0;
        for (int p = 0; p < m; ++p) {
            if (U >> p & 1) cU += in.cost(p);
            if (W >> p & 1) cW += in.cost(p);
        }
        return cU >= l && cW < l;
    }

    if (!sat || !valid_bundle(m, w.bundle)) return false;
    uint64_t Pmask = to_mask(w.bundle);
    Rat cP = cost_of(in, w.bundle);
    if (Rat(static_cast<long>(w.group.size())) * B < Rat(n) * cP) return false;
    if (axiom != JrAxiom::Fjr)
        for (int i : w.group)
            if ((prof.approval_mask(i) & Pmask) != Pmask) return false;
    std::vector<int> pstars;
    for (int p : w.bundle)
        if (!(pimask >> p & 1)) pstars.push_back(p);
    SatValue sP = sval(w.bundle);

    switch (axiom) {
        case JrAxiom::StrongEjr: {
            for (int i : w.group)
                if (sval(won_of(i)) < sP) return true;
            return false;
        }
        case JrAxiom::Ejr: {
            for (int i : w.group)
                if (sval(won_of(i)) >= sP) return false;
            return true;
        }
        case JrAxiom::Ejr1: {
            for (int i : w.group) {
                std::vector<int> wi = won_of(i);
                if (sval(wi) >= sP) return false;
                for (int ps : pstars) {
                    std::vector<int> ext = wi;
                    ext.insert(std::lower_bound(ext.begin(), ext.end(), ps), ps);
                    if (sval(ext) > sP) return false;
                }
            }
            return true;
        }
        case JrAxiom::EjrX: {
            if (pstars.empty()) return false;
            for (int i : w.group) {
                std::vector<int> wi = won_of(i);
                bool all_above = true;
                for (int ps : pstars) {
                    std::vector<int> ext = wi;
                    ext.insert(std::lower_bound(ext.begin(), ext.end(), ps), ps);
                    if (!(sval(ext) > sP)) { all_above = false; break; }
                }
                if (all_above) return false;
            }
            return true;
        }
        case JrAxiom::Pjr:
        case JrAxiom::Pjr1:
        case JrAxiom::PjrX: {
            uint64_t U = 0;
            for (int i : w.group) U |= prof.approval_mask(i) & pimask;
            std::vector<int> Ul = from_mask(U);
            if (axiom == JrAxiom::Pjr) return sval(Ul) < sP;
            if (axiom == JrAxiom::Pjr1) {
                if (sval(Ul) >= sP) return false;
                for (int ps : pstars) {
                    std::vector<int> ext = Ul;
                    ext.insert(std::lower_bound(ext.begin(), ext.end(), ps), ps);
                    if (sval(ext) > sP) return false;
                }
                return true;
            }
            for (int ps : pstars) {
                std::vector<int> ext = Ul;
                ext.insert(std::lower_bound(ext.begin(), ext.end(), ps), ps);
                if (!(sval(ext) > sP)) return true;
            }
            return false;
        }
        case JrAxiom::LocalBpjrL: {
            if (w.sub_bundle.empty() || !valid_bundle(m, w.sub_bundle)) return false;
            uint64_t Star = to_mask(w.sub_bundle);
            if ((Star & ~Pmask) != 0) return false;
            if (cost_of(in, w.sub_bundle) > cP) return false;
            uint64_t W = 0, U = ~uint64_t(0);
            for (int i : w.group) {
                W |= prof.approval_mask(i) & pimask;
                U &= prof.approval_mask(i);
            }
            U &= (uint64_t(1) << m) - 1;
            if ((W & ~Star) != 0 || W == Star) return false; // W strictly inside P*
            if ((Star & ~U) != 0) return false;              // P* within the unanimity set
            // P* must reach the best value any affordable unanimous sub-bundle gets
            SatValue vStar = sval(w.sub_bundle);
            std::vector<int> Ul = from_mask(U);
            bool best = true;
            each_subset(static_cast<int>(Ul.size()), [&](const std::vector<int>& kidx) {
                std::vector<int> Q;
                for (int k : kidx) Q.push_back(Ul[k]);
                if (cost_of(in, Q) <= cP && sval(Q) > vStar) {
                    best = false;
                    return false;
                }
                return true;
            });
            return best;
        }
        case JrAxiom::Fjr: {
            for (int i : w.group) {
                std::vector<int> owned = inter_sorted(prof.approval(i).approved, Pmask);
                if (sval(won_of(i)) >= sval(owned)) return false;
            }
            return true;
        }
        default: return false;
    }
}

bool verify_core_witness(const Instance& in, const Profile& prof, const Alloc& alloc, CoreMode mode,
                         const Rat& alpha, const std::optional<SatFn>& sat,
                         const CohesiveWitness& w) {
    int n = prof.n(), m = in.m();
    if (!valid_group(n, w.group) || !valid_bundle(m, w.bundle)) return false;
    Rat cP = cost_of(in, w.bundle);
    Rat scale = mode == CoreMode::EntitlementApprox ? alpha : Rat(1);
    if (Rat(static_cast<long>(w.group.size())) * in.budget() < scale * n * cP) return false;
    uint64_t pimask = to_mask(alloc.sel);

    if (prof.kind() == BallotKind::Cardinal) {
        for (int i : w.group) {
            auto score = [&](int p) { return prof.cardinal(i).score(p); };
            Rat satv = 0, interest = 0;
            for (int p : alloc.sel) satv += score(p);
            for (int p : w.bundle) interest += score(p);
            if (mode == CoreMode::SatApprox) {
                for (int ps = 0; ps < m; ++ps) {
                    Rat got = satv + (pimask >> ps & 1 ? Rat(0) : score(ps));
                    if (alpha * got >= interest) return false;
                }
            } else if (satv >= interest) {
                return false;
            }
        }
        return true;
    }
    if (prof.kind() != BallotKind::Approval || !sat) return false;
    for (int i : w.group) {
        uint64_t Ai = prof.approval_mask(i);
        SatValue thr = sat->of_set(in, from_mask(to_mask(w.bundle) & Ai));
        std::vector<int> wi = from_mask(Ai & pimask);
        if (mode == CoreMode::SatApprox) {
            for (int ps = 0; ps < m; ++ps) {
                uint64_t got = (Ai & pimask) | ((uint64_t(1) << ps) & Ai);
                if (SatValue::lin(alpha) * sat->of_set(in, from_mask(got)) >= thr) return false;
            }
        } else if (sat->of_set(in, wi) >= thr) {
            return false;
        }
    }
    return true;
}

} // namespace pb
