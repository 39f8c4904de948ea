#include "pb/knapsack.hpp"

#include "pb/error.hpp"

#include <algorithm>
#include <numeric>

namespace pb {

namespace {

// cost_i * scale and budget * scale as int64, throwing ScaleOverflow when the
// integers do not fit the DP regime.
struct ScaledProblem {
    std::vector<long long> w;
    long long W = 0;
    std::vector<long long> v;
};

long long to_ll(const mpz_class& z, const char* what) {
    if (!z.fits_slong_p()) throw Error("ScaleOverflow", std::string(what) + " overflows int64");
    return z.get_si();
}

ScaledProblem scale_problem(const std::vector<Rat>& costs, const std::vector<Rat>& values,
                            const Rat& budget, const KnapsackCaps& caps) {
    mpz_class dc = budget.get_den();
    for (const Rat& c : costs) mpz_lcm(dc.get_mpz_t(), dc.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_class dv = 1;
    for (const Rat& v : values) mpz_lcm(dv.get_mpz_t(), dv.get_mpz_t(), v.get_den().get_mpz_t());

    ScaledProblem s;
    s.W = to_ll(mpz_class(budget.get_num() * (dc / budget.get_den())), "scaled budget");
    if (s.W > caps.max_scaled_budget)
        throw Error("ScaleOverflow", "rescaled budget " + std::to_string(s.W) +
                                         " exceeds cap " +
                                         std::to_string(caps.max_scaled_budget));
    long long vsum = 0;
    for (size_t i = 0; i < costs.size(); ++i) {
        s.w.push_back(to_ll(mpz_class(costs[i].get_num() * (dc / costs[i].get_den())),
                            "scaled cost"));
        long long vi = to_ll(mpz_class(values[i].get_num() * (dv / values[i].get_den())),
                             "scaled value");
        if (vi < 0) throw Error("BadKnapsack", "negative value");
        vsum += vi;
        if (vsum > (1LL << 62))
            throw Error("ScaleOverflow", "scaled value sum exceeds 2^62");
        s.v.push_back(vi);
    }
    return s;
}

// dp[cap] = max scaled value achievable with total scaled cost <= cap, over
// the items in `idx`.
std::vector<long long> run_dp(const ScaledProblem& s, const std::vector<int>& idx,
                              long long W) {
    std::vector<long long> dp(W + 1, 0);
    for (int i : idx) {
        long long wi = s.w[i], vi = s.v[i];
        if (wi > W) continue;
        for (long long cap = W; cap >= wi; --cap)
            dp[cap] = std::max(dp[cap], dp[cap - wi] + vi);
    }
    return dp;
}

} // namespace

Rat knapsack_max_value(const std::vector<Rat>& costs, const std::vector<Rat>& values,
                       const Rat& budget, const KnapsackCaps& caps) {
    if (costs.size() != values.size()) throw Error("BadKnapsack", "size mismatch");
    if (budget < 0) return Rat(0);
    ScaledProblem s = scale_problem(costs, values, budget, caps);
    std::vector<int> idx(costs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<long long> dp = run_dp(s, idx, s.W);

    // Undo the value scaling: dp is in units of 1/dv.
    mpz_class dv = 1;
    for (const Rat& v : values) mpz_lcm(dv.get_mpz_t(), dv.get_mpz_t(), v.get_den().get_mpz_t());
    Rat out(mpz_class(static_cast<long>(dp[s.W])), dv);
    out.canonicalize();
    return out;
}

KnapsackResult knapsack_max(const std::vector<Rat>& costs, const std::vector<Rat>& values,
                            const Rat& budget, const std::vector<int>& pref,
                            const KnapsackCaps& caps) {
    const int m = static_cast<int>(costs.size());
    if (static_cast<int>(values.size()) != m) throw Error("BadKnapsack", "size mismatch");
    std::vector<int> order = pref;
    if (order.empty()) {
        order.resize(m);
        std::iota(order.begin(), order.end(), 0);
    }
    if (static_cast<int>(order.size()) != m) throw Error("BadKnapsack", "pref size mismatch");

    ScaledProblem s = scale_problem(costs, values, budget, caps);
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    const long long opt = run_dp(s, all, s.W).back();

    // Build the prefix-order minimal optimal subset: walk preference ranks,
    // including the first candidate that still completes to `opt` using only
    // later-ranked items (checked by a backward DP per round).
    std::vector<char> included(m, 0);
    long long Wr = s.W, Vr = opt;
    int start = 0;
    while (Vr > 0) {
        // suffix_ok[k]: item order[k] plus some subset of items ranked > k
        // reaches exactly Vr within Wr.
        int pick = -1;
        {
            std::vector<long long> bdp(Wr + 1, 0);
            std::vector<char> ok(m, 0);
            for (int k = m - 1; k >= start; --k) {
                int i = order[k];
                long long wi = s.w[i], vi = s.v[i];
                if (wi <= Wr && vi <= Vr && bdp[Wr - wi] == Vr - vi) ok[k] = 1;
                // then add item i to the suffix DP
                if (wi <= Wr)
                    for (long long cap = Wr; cap >= wi; --cap)
                        bdp[cap] = std::max(bdp[cap], bdp[cap - wi] + vi);
            }
            for (int k = start; k < m; ++k)
                if (ok[k]) {
                    pick = k;
                    break;
                }
        }
        if (pick < 0) throw Error("Internal", "knapsack reconstruction failed");
        int i = order[pick];
        included[i] = 1;
        Wr -= s.w[i];
        Vr -= s.v[i];
        start = pick + 1;
    }

    // Zero-value augmentation in preference order: the result is the minimal
    // inclusion-maximal optimum.
    for (int k = 0; k < m; ++k) {
        int i = order[k];
        if (!included[i] && s.v[i] == 0 && s.w[i] <= Wr) {
            included[i] = 1;
            Wr -= s.w[i];
        }
    }

    KnapsackResult res;
    res.value = 0;
    for (int i = 0; i < m; ++i)
        if (included[i]) {
            res.chosen.push_back(i);
            res.value += values[i];
        }
    return res;
}

} // namespace pb
