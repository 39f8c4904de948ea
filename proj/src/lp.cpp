#include "pb/lp.hpp"

#include "pb/error.hpp"

#include <algorithm>

namespace pb {

namespace {

struct Tableau {
    int rows = 0, cols = 0;
    std::vector<std::vector<Rat>> a; // rows x cols, basic columns are unit
    std::vector<Rat> b;              // rhs, kept >= 0
    std::vector<int> basis;          // basis[r] = column basic in row r
    std::vector<char> allowed;       // columns simplex may enter
    std::vector<Rat> z;              // reduced costs
    Rat zshift = 0;                  // objective value of the current basis

    void price(const std::vector<Rat>& cost) {
        z = cost;
        zshift = 0;
        for (int r = 0; r < rows; ++r) {
            const Rat& cb = cost[basis[r]];
            if (cb == 0) continue;
            zshift += cb * b[r];
            for (int j = 0; j < cols; ++j)
                if (a[r][j] != 0) z[j] -= cb * a[r][j];
        }
    }

    void pivot(int r, int j) {
        Rat inv = 1 / a[r][j];
        for (int k = 0; k < cols; ++k) a[r][k] *= inv;
        b[r] *= inv;
        for (int r2 = 0; r2 < rows; ++r2) {
            if (r2 == r || a[r2][j] == 0) continue;
            Rat f = a[r2][j];
            for (int k = 0; k < cols; ++k) a[r2][k] -= f * a[r][k];
            b[r2] -= f * b[r];
        }
        if (z[j] != 0) {
            Rat f = z[j];
            for (int k = 0; k < cols; ++k) z[k] -= f * a[r][k];
            zshift += f * b[r];
        }
        basis[r] = j;
    }

    // Minimizes; returns false when unbounded. Bland's rule throughout.
    bool iterate() {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < cols; ++j)
                if (allowed[j] && z[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Rat best;
            for (int r = 0; r < rows; ++r) {
                if (a[r][enter] <= 0) continue;
                Rat ratio = b[r] / a[r][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

} // namespace

LpResult lp_min(int nvars, const std::vector<std::pair<int, Rat>>& objective,
                const std::vector<LpConstraint>& cons) {
    const int m = static_cast<int>(cons.size());
    // Layout: [0, nvars) structural, then one slack/surplus per Le/Ge row,
    // then one artificial per Eq/Ge row.
    int nslack = 0, nart = 0;
    for (const auto& c : cons) {
        // A negative rhs flips the row, so the slack of a flipped Le row
        // turns into a surplus needing an artificial; count conservatively.
        if (c.sense != LpSense::Eq) ++nslack;
        ++nart;
    }
    Tableau t;
    t.rows = m;
    t.cols = nvars + nslack + nart;
    t.a.assign(m, std::vector<Rat>(t.cols, Rat(0)));
    t.b.assign(m, Rat(0));
    t.basis.assign(m, -1);
    t.allowed.assign(t.cols, 1);

    int slack_at = nvars, art_at = nvars + nslack;
    std::vector<char> is_art(t.cols, 0);
    for (int r = 0; r < m; ++r) {
        for (auto& [v, c] : cons[r].coef) {
            if (v < 0 || v >= nvars) throw Error("BadLp", "variable index out of range");
            t.a[r][v] += c;
        }
        t.b[r] = cons[r].rhs;
        int sgn = 1;
        if (t.b[r] < 0) {
            sgn = -1;
            t.b[r] = -t.b[r];
            for (int j = 0; j < nvars; ++j) t.a[r][j] = -t.a[r][j];
        }
        LpSense s = cons[r].sense;
        if (sgn < 0 && s == LpSense::Le) s = LpSense::Ge;
        else if (sgn < 0 && s == LpSense::Ge) s = LpSense::Le;
        if (cons[r].sense != LpSense::Eq) {
            t.a[r][slack_at] = (s == LpSense::Le) ? Rat(1) : Rat(-1);
            if (s == LpSense::Le) t.basis[r] = slack_at;
            ++slack_at;
        }
        if (t.basis[r] < 0) {
            t.a[r][art_at] = 1;
            t.basis[r] = art_at;
            is_art[art_at] = 1;
            ++art_at;
        }
    }

    // Phase 1: minimize the artificials' sum.
    std::vector<Rat> c1(t.cols, Rat(0));
    for (int j = 0; j < t.cols; ++j)
        if (is_art[j]) c1[j] = 1;
    t.price(c1);
    t.iterate(); // bounded below by 0, never unbounded
    LpResult res;
    if (t.zshift != 0) return res; // infeasible

    // Pivot artificials out of the basis (or drop redundant rows in place by
    // leaving them; their row stays all-zero over allowed columns).
    for (int r = 0; r < t.rows; ++r) {
        if (!is_art[t.basis[r]]) continue;
        int enter = -1;
        for (int j = 0; j < t.cols && enter < 0; ++j)
            if (!is_art[j] && t.a[r][j] != 0) enter = j;
        if (enter >= 0) {
            t.price(c1); // keep z consistent for pivot bookkeeping
            t.pivot(r, enter);
        }
    }
    for (int j = 0; j < t.cols; ++j)
        if (is_art[j]) t.allowed[j] = 0;

    // Phase 2.
    std::vector<Rat> c2(t.cols, Rat(0));
    for (auto& [v, c] : objective) {
        if (v < 0 || v >= nvars) throw Error("BadLp", "objective variable out of range");
        c2[v] += c;
    }
    t.price(c2);
    bool bounded = t.iterate();
    res.feasible = true;
    res.unbounded = !bounded;
    res.x.assign(nvars, Rat(0));
    for (int r = 0; r < t.rows; ++r)
        if (t.basis[r] < nvars) res.x[t.basis[r]] = t.b[r];
    if (bounded) {
        res.objective = 0;
        for (auto& [v, c] : objective) res.objective += c * res.x[v];
    }
    return res;
}

LpResult lp_max(int nvars, const std::vector<std::pair<int, Rat>>& objective,
                const std::vector<LpConstraint>& cons) {
    std::vector<std::pair<int, Rat>> neg = objective;
    for (auto& [v, c] : neg) c = -c;
    LpResult r = lp_min(nvars, neg, cons);
    if (r.feasible && !r.unbounded) r.objective = -r.objective;
    return r;
}

} // namespace pb
