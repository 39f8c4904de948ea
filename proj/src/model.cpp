#include "pb/model.hpp"

#include <algorithm>
#include <bit>

namespace pb {

Instance::Instance(std::vector<std::pair<ProjectId, Rat>> projects, Rat budget)
    : budget_(std::move(budget)) {
    // mpq comparisons assume canonical form; normalize caller-built values.
    budget_.canonicalize();
    if (budget_ <= 0) throw Error("NonPositiveBudget", "budget limit must be positive");
    ids_.reserve(projects.size());
    cost_.reserve(projects.size());
    for (auto& [id, c] : projects) {
        c.canonicalize();
        if (c <= 0) throw Error("NonPositiveCost", "project '" + id + "' has cost " + rat_str(c));
        if (c > budget_)
            throw Error("ProjectOverBudget",
                        "project '" + id + "' costs more than the budget limit");
        if (!index_.emplace(id, static_cast<int>(ids_.size())).second)
            throw Error("DuplicateProjectId", "project '" + id + "' declared twice");
        ids_.push_back(std::move(id));
        cost_.push_back(std::move(c));
    }
}

int Instance::index(const ProjectId& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) throw Error("UnknownProject", "no project '" + p + "'");
    return it->second;
}

Rat Instance::total_cost(const std::vector<int>& sel) const {
    Rat t = 0;
    for (int p : sel) t += cost_[p];
    return t;
}

bool Instance::unit_cost() const {
    for (const Rat& c : cost_)
        if (c != 1) return false;
    return budget_.get_den() == 1 && budget_ >= 1;
}

bool Alloc::contains(int p) const {
    return std::binary_search(sel.begin(), sel.end(), p);
}

std::set<ProjectId> Alloc::id_set(const Instance& in) const {
    std::set<ProjectId> out;
    for (int p : sel) out.insert(in.id(p));
    return out;
}

Alloc make_alloc(const Instance& in, std::vector<int> sel) {
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    Alloc a{std::move(sel), Rat(0)};
    a.total = in.total_cost(a.sel);
    if (a.total > in.budget())
        throw Error("InfeasibleAllocation",
                    "selected projects cost " + rat_str(a.total) + " > budget " +
                        rat_str(in.budget()));
    return a;
}

Alloc make_alloc_ids(const Instance& in, const std::set<ProjectId>& ids) {
    std::vector<int> sel;
    sel.reserve(ids.size());
    for (const auto& p : ids) sel.push_back(in.index(p));
    return make_alloc(in, std::move(sel));
}

Rat CardinalBallot::score(int p) const {
    auto it = std::lower_bound(scores.begin(), scores.end(), p,
                               [](const auto& e, int q) { return e.first < q; });
    return it != scores.end() && it->first == p ? it->second : Rat(0);
}

bool ApprovalBallot::approves(int p) const {
    return std::binary_search(approved.begin(), approved.end(), p);
}

Rat CumulativeBallot::weight(int p) const {
    auto it = std::lower_bound(weights.begin(), weights.end(), p,
                               [](const auto& e, int q) { return e.first < q; });
    return it != weights.end() && it->first == p ? it->second : Rat(0);
}

BallotKind kind_of(const Ballot& b) {
    return static_cast<BallotKind>(b.index());
}

const char* kind_name(BallotKind k) {
    switch (k) {
    case BallotKind::Cardinal: return "cardinal";
    case BallotKind::Approval: return "approval";
    case BallotKind::Ordinal: return "ordinal";
    case BallotKind::WeakOrdinal: return "weak-ordinal";
    case BallotKind::Cumulative: return "cumulative";
    }
    return "?";
}

namespace {

void validate_ballot(const Ballot& b, const Instance& in) {
    const int m = in.m();
    auto check_idx = [&](int p) {
        if (p < 0 || p >= m) throw Error("UnknownProject", "ballot references missing project");
    };
    if (auto* c = std::get_if<CardinalBallot>(&b)) {
        int prev = -1;
        for (auto& [p, s] : c->scores) {
            check_idx(p);
            if (p <= prev) throw Error("BadBallot", "cardinal scores not sorted/unique");
            if (s < 0) throw Error("BadBallot", "negative score");
            prev = p;
        }
    } else if (auto* a = std::get_if<ApprovalBallot>(&b)) {
        int prev = -1;
        for (int p : a->approved) {
            check_idx(p);
            if (p <= prev) throw Error("BadBallot", "approval set not sorted/unique");
            prev = p;
        }
    } else if (auto* o = std::get_if<OrdinalBallot>(&b)) {
        std::vector<char> seen(m, 0);
        for (int p : o->ranking) {
            check_idx(p);
            if (seen[p]) throw Error("BadBallot", "duplicate project in ranking");
            seen[p] = 1;
        }
    } else if (auto* w = std::get_if<WeakOrdinalBallot>(&b)) {
        std::vector<char> seen(m, 0);
        for (auto& cls : w->classes) {
            if (cls.empty()) throw Error("BadBallot", "empty indifference class");
            for (int p : cls) {
                check_idx(p);
                if (seen[p]) throw Error("BadBallot", "project in two indifference classes");
                seen[p] = 1;
            }
        }
    } else if (auto* cu = std::get_if<CumulativeBallot>(&b)) {
        int prev = -1;
        Rat sum = 0;
        for (auto& [p, wt] : cu->weights) {
            check_idx(p);
            if (p <= prev) throw Error("BadBallot", "cumulative weights not sorted/unique");
            if (wt < 0) throw Error("BadBallot", "negative weight");
            prev = p;
            sum += wt;
        }
        if (sum > 1) throw Error("BadBallot", "cumulative weights sum to " + rat_str(sum) + " > 1");
    }
}

} // namespace

Profile::Profile(const Instance& in, std::vector<Ballot> ballots)
    : ballots_(std::move(ballots)) {
    if (ballots_.empty()) throw Error("EmptyProfile", "a profile needs at least one ballot");
    kind_ = kind_of(ballots_.front());
    for (Ballot& b : ballots_) {
        if (kind_of(b) != kind_)
            throw Error("MixedProfile", "all ballots in a profile must share one format");
        // mpq comparisons assume canonical form; normalize caller-built values.
        if (auto* c = std::get_if<CardinalBallot>(&b))
            for (auto& [p, s] : c->scores) s.canonicalize();
        else if (auto* cu = std::get_if<CumulativeBallot>(&b))
            for (auto& [p, wt] : cu->weights) wt.canonicalize();
        validate_ballot(b, in);
    }
}

const CardinalBallot& Profile::cardinal(int i) const {
    if (auto* b = std::get_if<CardinalBallot>(&ballots_[i])) return *b;
    throw Error("WrongProfileVariant", "cardinal ballot required");
}
const ApprovalBallot& Profile::approval(int i) const {
    if (auto* b = std::get_if<ApprovalBallot>(&ballots_[i])) return *b;
    throw Error("WrongProfileVariant", "approval ballot required");
}
const OrdinalBallot& Profile::ordinal(int i) const {
    if (auto* b = std::get_if<OrdinalBallot>(&ballots_[i])) return *b;
    throw Error("WrongProfileVariant", "ordinal ballot required");
}
const WeakOrdinalBallot& Profile::weak_ordinal(int i) const {
    if (auto* b = std::get_if<WeakOrdinalBallot>(&ballots_[i])) return *b;
    throw Error("WrongProfileVariant", "weak-ordinal ballot required");
}
const CumulativeBallot& Profile::cumulative(int i) const {
    if (auto* b = std::get_if<CumulativeBallot>(&ballots_[i])) return *b;
    throw Error("WrongProfileVariant", "cumulative ballot required");
}

std::uint64_t Profile::approval_mask(int i) const {
    std::uint64_t m = 0;
    for (int p : approval(i).approved) m |= std::uint64_t{1} << p;
    return m;
}

TieBreakOrder TieBreakOrder::lexicographic(const Instance& in) {
    TieBreakOrder t;
    t.kind_ = Kind::Lexicographic;
    t.order_.resize(in.m());
    for (int i = 0; i < in.m(); ++i) t.order_[i] = i;
    std::sort(t.order_.begin(), t.order_.end(),
              [&](int a, int b) { return in.id(a) < in.id(b); });
    t.rank_.resize(in.m());
    for (int k = 0; k < in.m(); ++k) t.rank_[t.order_[k]] = k;
    return t;
}

TieBreakOrder TieBreakOrder::file_order(const Instance& in) {
    TieBreakOrder t;
    t.kind_ = Kind::FileOrder;
    t.order_.resize(in.m());
    t.rank_.resize(in.m());
    for (int i = 0; i < in.m(); ++i) t.order_[i] = t.rank_[i] = i;
    return t;
}

TieBreakOrder TieBreakOrder::explicit_order(const Instance& in,
                                            const std::vector<ProjectId>& ids) {
    if (static_cast<int>(ids.size()) != in.m())
        throw Error("BadTieBreak", "explicit order must list every project exactly once");
    TieBreakOrder t;
    t.kind_ = Kind::Explicit;
    t.rank_.assign(in.m(), -1);
    for (const auto& id : ids) {
        int p = in.index(id);
        if (t.rank_[p] != -1) throw Error("BadTieBreak", "project '" + id + "' listed twice");
        t.rank_[p] = static_cast<int>(t.order_.size());
        t.order_.push_back(p);
    }
    return t;
}

void require_order_match(const Instance& in, const TieBreakOrder& tb) {
    if (tb.size() != in.m())
        throw Error("BadTieBreak", "tie-break order covers " + std::to_string(tb.size()) +
                                       " projects but the instance has " +
                                       std::to_string(in.m()));
}

int TieBreakOrder::compare_sets(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> ra, rb;
    ra.reserve(a.size());
    rb.reserve(b.size());
    for (int p : a) ra.push_back(rank_[p]);
    for (int p : b) rb.push_back(rank_[p]);
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    if (ra == rb) return 0;
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end()) ? -1 : 1;
}

bool is_feasible(const Instance& in, const std::set<ProjectId>& projects) {
    Rat t = 0;
    for (const auto& p : projects) t += in.cost(in.index(p));
    return t <= in.budget();
}

bool is_feasible_mask(const Instance& in, const std::vector<int>& sel) {
    return in.total_cost(sel) <= in.budget();
}

bool is_exhaustive(const Instance& in, const Alloc& a) {
    Rat left = in.budget() - a.total;
    for (int p = 0; p < in.m(); ++p)
        if (!a.contains(p) && in.cost(p) <= left) return false;
    return true;
}

bool validate_ballot_format(const Ballot& b, const Instance& in, BallotFormat f, int t) {
    switch (f) {
    case BallotFormat::Plain:
        return true;
    case BallotFormat::TApproval: {
        auto* a = std::get_if<ApprovalBallot>(&b);
        if (!a) throw Error("FormatMismatch", "t-approval applies to approval ballots");
        return static_cast<int>(a->approved.size()) <= t;
    }
    case BallotFormat::Knapsack: {
        auto* a = std::get_if<ApprovalBallot>(&b);
        if (!a) throw Error("FormatMismatch", "knapsack applies to approval ballots");
        return in.total_cost(a->approved) <= in.budget();
    }
    case BallotFormat::Cumulative: {
        auto* c = std::get_if<CumulativeBallot>(&b);
        if (!c) throw Error("FormatMismatch", "cumulative check applies to cumulative ballots");
        Rat sum = 0;
        for (auto& [p, w] : c->weights) sum += w;
        return sum <= 1;
    }
    }
    return true;
}

std::uint64_t to_mask(const std::vector<int>& xs) {
    std::uint64_t m = 0;
    for (int x : xs) m |= std::uint64_t{1} << x;
    return m;
}

std::vector<int> from_mask(std::uint64_t mask) {
    std::vector<int> out;
    while (mask) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

} // namespace pb
