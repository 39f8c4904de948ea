#include "pb/axioms_fairness.hpp"
#include "pb/axioms_other.hpp"
#include "pb/model.hpp"
#include "pb/pabulib.hpp"
#include "pb/rational.hpp"
#include "pb/rules_market.hpp"
#include "pb/rules_welfare.hpp"
#include "pb/satisfaction.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

using nlohmann::json; // plain json: objects are key-sorted, which keeps reports byte-stable
using namespace pb;

namespace {

constexpr int kOk = 0, kParseErr = 1, kUsageErr = 2, kViolated = 3, kCapErr = 4;

int code_for(const pb::Error& e) {
    return e.kind() == "CapExceeded" || e.kind() == "ScaleOverflow" ? kCapErr : kUsageErr;
}

struct StageClock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    void lap(const char* stage) {
        auto t1 = std::chrono::steady_clock::now();
        std::fprintf(stderr, "# %s %.3fs\n", stage,
                     std::chrono::duration<double>(t1 - t0).count());
        t0 = t1;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw pb::Error("FileRead", "cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw pb::Error("FileWrite", "cannot open " + out);
    f << text;
}

std::string fnv_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (s.back() == ',') out.push_back("");
    return out;
}

// --- election JSON <-> model ---------------------------------------------

json ballot_json(const Instance& in, const Ballot& b) {
    json j = json::object();
    switch (kind_of(b)) {
    case BallotKind::Approval: {
        json arr = json::array();
        for (int p : std::get<ApprovalBallot>(b).approved) arr.push_back(in.id(p));
        j["approved"] = arr;
        break;
    }
    case BallotKind::Cardinal: {
        json obj = json::object();
        for (const auto& [p, s] : std::get<CardinalBallot>(b).scores) obj[in.id(p)] = rat_frac(s);
        j["scores"] = obj;
        break;
    }
    case BallotKind::Ordinal: {
        json arr = json::array();
        for (int p : std::get<OrdinalBallot>(b).ranking) arr.push_back(in.id(p));
        j["ranking"] = arr;
        break;
    }
    case BallotKind::WeakOrdinal: {
        json arr = json::array();
        for (const auto& cls : std::get<WeakOrdinalBallot>(b).classes) {
            json c = json::array();
            for (int p : cls) c.push_back(in.id(p));
            arr.push_back(c);
        }
        j["classes"] = arr;
        break;
    }
    case BallotKind::Cumulative: {
        json obj = json::object();
        for (const auto& [p, w] : std::get<CumulativeBallot>(b).weights) obj[in.id(p)] = rat_frac(w);
        j["weights"] = obj;
        break;
    }
    }
    return j;
}

json election_json(const Instance& in, const Profile& prof, const ElectionMetadata& meta) {
    json j;
    j["budget"] = rat_frac(in.budget());
    json projects = json::array();
    for (int p = 0; p < in.m(); ++p)
        projects.push_back(json{{"cost", rat_frac(in.cost(p))}, {"id", in.id(p)}});
    j["projects"] = projects;
    json ballots = json::array();
    for (int i = 0; i < prof.n(); ++i) ballots.push_back(ballot_json(in, prof[i]));
    j["ballots"] = ballots;
    j["vote_kind"] = kind_name(prof.kind());
    json entries = json::array();
    for (const auto& [k, v] : meta.entries) entries.push_back(json::array({k, v}));
    json extra = json::object();
    for (const auto& [k, v] : meta.extra) extra[k] = v;
    j["meta"] = json{{"entries", entries}, {"extra", extra}};
    return j;
}

std::tuple<Instance, Profile, ElectionMetadata> election_from_json(const json& j) {
    std::vector<std::pair<ProjectId, Rat>> projects;
    for (const auto& p : j.at("projects"))
        projects.emplace_back(p.at("id").get<std::string>(),
                              parse_rat(p.at("cost").get<std::string>()));
    Instance in(std::move(projects), parse_rat(j.at("budget").get<std::string>()));
    const std::string kind = j.at("vote_kind").get<std::string>();
    std::vector<Ballot> ballots;
    for (const auto& bj : j.at("ballots")) {
        if (kind == "approval") {
            std::vector<int> a;
            for (const auto& id : bj.at("approved")) a.push_back(in.index(id.get<std::string>()));
            std::sort(a.begin(), a.end());
            ballots.push_back(ApprovalBallot{std::move(a)});
        } else if (kind == "cardinal") {
            std::vector<std::pair<int, Rat>> sc;
            for (const auto& [pid, val] : bj.at("scores").items())
                sc.emplace_back(in.index(pid), parse_rat(val.get<std::string>()));
            std::sort(sc.begin(), sc.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            ballots.push_back(CardinalBallot{std::move(sc)});
        } else if (kind == "ordinal") {
            std::vector<int> r;
            for (const auto& id : bj.at("ranking")) r.push_back(in.index(id.get<std::string>()));
            ballots.push_back(OrdinalBallot{std::move(r)});
        } else if (kind == "weak-ordinal") {
            std::vector<std::vector<int>> classes;
            for (const auto& cj : bj.at("classes")) {
                std::vector<int> cls;
                for (const auto& id : cj) cls.push_back(in.index(id.get<std::string>()));
                std::sort(cls.begin(), cls.end());
                classes.push_back(std::move(cls));
            }
            ballots.push_back(WeakOrdinalBallot{std::move(classes)});
        } else if (kind == "cumulative") {
            std::vector<std::pair<int, Rat>> w;
            for (const auto& [pid, val] : bj.at("weights").items())
                w.emplace_back(in.index(pid), parse_rat(val.get<std::string>()));
            std::sort(w.begin(), w.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            ballots.push_back(CumulativeBallot{std::move(w)});
        } else {
            throw pb::Error("UnknownVoteType", "vote_kind '" + kind + "'");
        }
    }
    Profile prof(in, std::move(ballots));
    ElectionMetadata meta;
    if (j.contains("meta")) {
        for (const auto& e : j.at("meta").at("entries"))
            meta.entries.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        for (const auto& [k, v] : j.at("meta").at("extra").items())
            meta.extra[k] = v.get<std::string>();
    }
    return {std::move(in), std::move(prof), std::move(meta)};
}

struct Loaded {
    Instance in;
    Profile prof;
    ElectionMetadata meta;
    std::string hash;
};

Loaded load_election(const std::string& path) {
    std::string text = read_file(path);
    Loaded out;
    out.hash = fnv_hex(text);
    std::size_t k = text.find_first_not_of(" \t\r\n");
    if (k != std::string::npos && text[k] == '{') {
        std::tie(out.in, out.prof, out.meta) = election_from_json(json::parse(text));
    } else {
        ParseResult pr = parse_pabulib(text);
        for (const std::string& w : pr.warnings) std::cerr << "# warning: " << w << "\n";
        out.in = std::move(pr.instance);
        out.prof = std::move(pr.profile);
        out.meta = std::move(pr.meta);
    }
    return out;
}

// --- flag parsing ---------------------------------------------------------

TieBreakOrder make_tiebreak(const Instance& in, const std::string& spec) {
    if (spec == "lex") return TieBreakOrder::lexicographic(in);
    if (spec == "file-order") return TieBreakOrder::file_order(in);
    if (spec.rfind("explicit:", 0) == 0) {
        std::vector<ProjectId> ids;
        for (std::string& s : split_list(spec.substr(9))) ids.push_back(std::move(s));
        return TieBreakOrder::explicit_order(in, ids);
    }
    throw pb::Error("BadTieBreak", "tiebreak must be lex, file-order, or explicit:<ids>");
}

std::optional<CompletionSpec> make_completion(const std::string& s) {
    if (s.empty()) return std::nullopt;
    CompletionSpec cs;
    if (s == "budget-step") {
        cs.method = CompletionMethod::BudgetVariation;
        return cs;
    }
    if (s == "perturb") {
        cs.method = CompletionMethod::Perturbation;
        return cs;
    }
    if (s == "greedy" || s == "greedy:score-per-cost") {
        cs.method = CompletionMethod::GreedyCompletion;
        cs.key = GreedyKey::ScorePerCost;
        return cs;
    }
    if (s == "greedy:score") {
        cs.method = CompletionMethod::GreedyCompletion;
        cs.key = GreedyKey::Score;
        return cs;
    }
    throw pb::Error("BadCompletion",
                    "completion must be greedy[:score|:score-per-cost], budget-step, or perturb");
}

EnumCaps resolve_caps(int max_n, int max_m) {
    EnumCaps caps;
    if (const char* env = std::getenv("PB_ENGINE_CAPS")) {
        int en = 0, em = 0;
        char tail = 0;
        if (std::sscanf(env, "%d,%d%c", &en, &em, &tail) != 2 || en <= 0 || em <= 0)
            throw pb::Error("BadCaps", "PB_ENGINE_CAPS must be '<max_n>,<max_m>'");
        caps.max_n = en;
        caps.max_m = em;
    }
    if (max_n > 0) caps.max_n = max_n;
    if (max_m > 0) caps.max_m = max_m;
    return caps;
}

std::optional<SatFn> make_sat(const std::string& name, const Instance& in, const Profile& prof) {
    if (name.empty()) return std::nullopt;
    return SatFn::by_name(name, in, &prof);
}

RuleFn make_rule(const std::string& id, const std::optional<SatFn>& sat) {
    auto welfare = [](WelfareObjective obj) {
        return RuleFn([obj = std::move(obj)](const Instance& in, const Profile& prof,
                                             const TieBreakOrder& tb) {
            return maximize_welfare(in, prof, obj, tb);
        });
    };
    if (id == "maxwel_card") return welfare(WelfareObjective::util_sat(SatFn::card()));
    if (id == "maxwel_cost") return welfare(WelfareObjective::util_sat(SatFn::cost()));
    if (id == "maxwel_util")
        return welfare(sat ? WelfareObjective::util_sat(*sat) : WelfareObjective::util());
    if (id == "maxwel_cc") return welfare(WelfareObjective::cc());
    if (id == "maxwel_egal") return welfare(WelfareObjective::egal(sat));
    if (id == "maxwel_nash") return welfare(WelfareObjective::nash(sat));
    if (id == "greedy_card")
        return [](const Instance& in, const Profile& prof, const TieBreakOrder& tb) {
            return greedy_welfare(in, prof, GreedyKey::ScorePerCost, tb);
        };
    if (id == "greedy_cost")
        return [](const Instance& in, const Profile& prof, const TieBreakOrder& tb) {
            return greedy_welfare(in, prof, GreedyKey::Score, tb);
        };
    if (id == "phragmen")
        return [](const Instance& in, const Profile& prof, const TieBreakOrder& tb) {
            return seq_phragmen(in, prof, tb).first;
        };
    if (id == "maximin_support")
        return [](const Instance& in, const Profile& prof, const TieBreakOrder& tb) {
            return maximin_support(in, prof, tb).first;
        };
    if (id == "mes")
        return [sat](const Instance& in, const Profile& prof, const TieBreakOrder& tb) {
            return mes(in, prof, sat, tb).alloc;
        };
    throw pb::Error("UnknownRule", "rule id '" + id + "'");
}

// --- report building ------------------------------------------------------

json alloc_json(const Instance& in, const Alloc& a) {
    json ids = json::array();
    for (int p : a.sel) ids.push_back(in.id(p));
    Rat leftover = in.budget() - a.total;
    return json{{"ids", ids}, {"leftover", rat_frac(leftover)}, {"total_cost", rat_frac(a.total)}};
}

json witness_json(const Instance& in, const CohesiveWitness& w) {
    json j;
    json group = json::array();
    for (int i : w.group) group.push_back(i + 1); // voters are 1-based in reports
    j["group"] = group;
    json bundle = json::array();
    for (int p : w.bundle) bundle.push_back(in.id(p));
    j["bundle"] = bundle;
    if (!w.alpha.empty()) {
        json a = json::object();
        for (const auto& [voter, r] : w.alpha) a[std::to_string(voter + 1)] = rat_frac(r);
        j["alpha"] = a;
    }
    if (w.beta) j["beta"] = rat_frac(*w.beta);
    if (w.level) j["level"] = rat_frac(*w.level);
    if (!w.sub_bundle.empty()) {
        json sb = json::array();
        for (int p : w.sub_bundle) sb.push_back(in.id(p));
        j["sub_bundle"] = sb;
    }
    if (w.extra) j["extra"] = in.id(*w.extra);
    return j;
}

json price_json(const Instance& in, const PriceSystem& ps) {
    json pay = json::object();
    for (std::size_t i = 0; i < ps.gamma.size(); ++i) {
        if (ps.gamma[i].empty()) continue;
        json row = json::object();
        for (const auto& [p, amt] : ps.gamma[i]) row[in.id(p)] = rat_frac(amt);
        pay[std::to_string(i + 1)] = row;
    }
    return json{{"alpha", rat_frac(ps.alpha)}, {"payments", pay}};
}

const char* status_str(VerdictStatus s) {
    switch (s) {
    case VerdictStatus::Satisfied: return "satisfied";
    case VerdictStatus::Violated: return "violated";
    case VerdictStatus::Inapplicable: return "inapplicable";
    }
    return "?";
}

json election_fingerprint(const Loaded& L) {
    return json{{"budget", rat_frac(L.in.budget())},
                {"hash", "fnv1a64:" + L.hash},
                {"m", L.in.m()},
                {"n", L.prof.n()},
                {"vote_kind", kind_name(L.prof.kind())}};
}

void add_sat_table(json& rep, const Loaded& L, const Alloc& alloc,
                   const std::optional<SatFn>& sat) {
    bool cardinal = L.prof.kind() == BallotKind::Cardinal;
    if (!cardinal && !(L.prof.kind() == BallotKind::Approval && sat)) return;
    json per = json::array();
    for (int i = 0; i < L.prof.n(); ++i)
        per.push_back(voter_satisfaction(L.in, L.prof, i, alloc, sat).str());
    rep["satisfaction"] = json{{"function", sat ? sat->name() : "scores"}, {"per_voter", per}};
}

void emit_report(const json& rep, const std::string& out) {
    write_output(rep.dump(2) + "\n", out);
}

// --- axiom dispatch -------------------------------------------------------

const std::set<std::string> kAxiomIds = {
    "strong-ejr", "ejr",       "ejr1",       "ejrx",          "pjr",
    "pjr1",       "pjrx",      "local-bpjr-l", "strong-bpjr-l", "fjr",
    "core",       "core-sat-approx", "core-entitlement", "priceable", "priceable-c6",
    "fair-share", "cpsc",      "ipsc",       "cumulative-pr", "exhaustive"};

std::pair<json, bool> run_axiom(const std::string& id, const Loaded& L, const Alloc& alloc,
                                const std::optional<SatFn>& sat, const Rat& alpha,
                                bool relative_budget, const EnumCaps& caps) {
    json e;
    e["axiom"] = id;
    auto from_verdict = [&](const Verdict& v) {
        e["status"] = status_str(v.status);
        e["detail"] = v.detail;
        if (v.witness) e["witness"] = witness_json(L.in, *v.witness);
        return std::make_pair(e, v.status == VerdictStatus::Violated);
    };
    if (id == "exhaustive") {
        Rat leftover = L.in.budget() - alloc.total;
        int fits = -1;
        for (int p = 0; p < L.in.m() && fits < 0; ++p)
            if (!alloc.contains(p) && L.in.cost(p) <= leftover) fits = p;
        bool ex = fits < 0;
        e["status"] = ex ? "satisfied" : "violated";
        e["detail"] = ex ? "no unselected project fits the leftover budget"
                         : "project " + L.in.id(fits) + " (cost " + rat_str(L.in.cost(fits)) +
                               ") still fits the leftover " + rat_str(leftover);
        if (!ex) e["witness"] = json{{"extra", L.in.id(fits)}};
        return {e, !ex};
    }
    if (id == "priceable" || id == "priceable-c6") {
        PriceStrength st =
            id == "priceable" ? PriceStrength::None : PriceStrength::C6AndAlphaGtB;
        PriceVerdict pv = check_priceable(L.in, L.prof, alloc, st);
        e["status"] = pv.priceable ? "satisfied" : "violated";
        e["detail"] = pv.detail;
        if (pv.system) e["witness"] = price_json(L.in, *pv.system);
        return {e, !pv.priceable};
    }
    if (auto ja = jr_axiom_by_name(id))
        return from_verdict(check_jr(L.in, L.prof, alloc, *ja, sat, relative_budget, caps));
    if (id == "core")
        return from_verdict(check_core(L.in, L.prof, alloc, CoreMode::Exact, 1, sat, caps));
    if (id == "core-sat-approx")
        return from_verdict(check_core(L.in, L.prof, alloc, CoreMode::SatApprox, alpha, sat, caps));
    if (id == "core-entitlement")
        return from_verdict(
            check_core(L.in, L.prof, alloc, CoreMode::EntitlementApprox, alpha, sat, caps));
    if (id == "fair-share") return from_verdict(check_fair_share(L.in, L.prof, alloc));
    if (id == "cpsc") return from_verdict(check_psc(L.in, L.prof, alloc, PscVariant::Cpsc, caps));
    if (id == "ipsc") return from_verdict(check_psc(L.in, L.prof, alloc, PscVariant::Ipsc, caps));
    if (id == "cumulative-pr")
        return from_verdict(check_cumulative_pr(L.in, L.prof, alloc, caps));
    throw pb::Error("UnknownAxiom", "axiom id '" + id + "'");
}

// --- subcommand argument bags --------------------------------------------

struct CommonArgs {
    std::string file;
    std::string rule;
    std::string sat;
    std::string tiebreak = "lex";
    std::string completion;
    std::string out;
    int max_n = 0;
    int max_m = 0;
};

struct ComputeArgs : CommonArgs {
    std::string assert_project;
};

struct AuditArgs : CommonArgs {
    std::string allocation;
    bool have_allocation = false;
    std::string axioms;
    std::string alpha = "1";
    bool relative_budget = false;
};

struct ConvertArgs {
    std::string file;
    std::string to;
    std::string out;
};

struct DynamicArgs : CommonArgs {
    std::string kind;
    std::string project;
    std::string new_cost;
    std::string new_budget;
    std::string parts;
    std::string merged;
    std::string merged_id;
};

struct ManipArgs : CommonArgs {
    int voter = 0;
    std::string mode = "exact";
};

RuleFn build_rule(const std::string& id, const std::optional<SatFn>& sat,
                  const std::string& completion) {
    RuleFn rule = make_rule(id, sat);
    if (auto cs = make_completion(completion)) {
        RuleFn inner = std::move(rule);
        CompletionSpec spec = *cs;
        rule = [inner = std::move(inner), spec](const Instance& in, const Profile& prof,
                                                const TieBreakOrder& tb) {
            return complete(inner, spec, in, prof, tb);
        };
    }
    return rule;
}

json rule_fingerprint(const std::string& id, const std::string& sat, const std::string& tiebreak,
                      const std::string& completion) {
    json j;
    j["completion"] = completion.empty() ? json() : json(completion);
    j["id"] = id;
    j["sat"] = sat.empty() ? json() : json(sat);
    j["tiebreak"] = tiebreak;
    return j;
}

// --- subcommands ----------------------------------------------------------

int cmd_compute(const ComputeArgs& a) {
    StageClock clock;
    Loaded L;
    try {
        L = load_election(a.file);
    } catch (const std::exception& e) {
        std::cerr << "error [parse]: " << e.what() << "\n";
        return kParseErr;
    }
    clock.lap("parse");
    const char* stage = "allocation";
    try {
        TieBreakOrder tb = make_tiebreak(L.in, a.tiebreak);
        std::optional<SatFn> sat = make_sat(a.sat, L.in, L.prof);
        RuleFn rule = build_rule(a.rule, sat, a.completion);
        Alloc alloc = rule(L.in, L.prof, tb);
        clock.lap("allocation");
        stage = "report";
        json rep;
        rep["election"] = election_fingerprint(L);
        rep["rule"] = rule_fingerprint(a.rule, a.sat, a.tiebreak, a.completion);
        rep["allocation"] = alloc_json(L.in, alloc);
        add_sat_table(rep, L, alloc, sat);
        int code = kOk;
        if (!a.assert_project.empty()) {
            bool selected = alloc.contains(L.in.index(a.assert_project));
            rep["assert"] = json{{"project", a.assert_project}, {"selected", selected}};
            code = selected ? kOk : kViolated;
        }
        emit_report(rep, a.out);
        clock.lap("report");
        return code;
    } catch (const pb::Error& e) {
        std::cerr << "error [" << stage << "]: " << e.what() << "\n";
        return code_for(e);
    }
}

int cmd_audit(const AuditArgs& a) {
    StageClock clock;
    if (a.rule.empty() == !a.have_allocation) {
        std::cerr << "error [usage]: exactly one of --rule and --allocation is required\n";
        return kUsageErr;
    }
    Loaded L;
    try {
        L = load_election(a.file);
    } catch (const std::exception& e) {
        std::cerr << "error [parse]: " << e.what() << "\n";
        return kParseErr;
    }
    clock.lap("parse");
    const char* stage = "allocation";
    try {
        std::vector<std::string> axioms = split_list(a.axioms);
        for (const std::string& id : axioms)
            if (!kAxiomIds.count(id)) throw pb::Error("UnknownAxiom", "axiom id '" + id + "'");
        EnumCaps caps = resolve_caps(a.max_n, a.max_m);
        TieBreakOrder tb = make_tiebreak(L.in, a.tiebreak);
        std::optional<SatFn> sat = make_sat(a.sat, L.in, L.prof);
        Rat alpha = parse_rat(a.alpha);

        Alloc alloc;
        json rep;
        rep["election"] = election_fingerprint(L);
        if (!a.rule.empty()) {
            RuleFn rule = build_rule(a.rule, sat, a.completion);
            alloc = rule(L.in, L.prof, tb);
            rep["rule"] = rule_fingerprint(a.rule, a.sat, a.tiebreak, a.completion);
        } else {
            std::set<ProjectId> ids;
            for (const std::string& id : split_list(a.allocation)) ids.insert(id);
            alloc = make_alloc_ids(L.in, ids);
            rep["rule"] = rule_fingerprint("explicit-allocation", a.sat, a.tiebreak, "");
        }
        rep["allocation"] = alloc_json(L.in, alloc);
        add_sat_table(rep, L, alloc, sat);
        clock.lap("allocation");

        stage = "axioms";
        bool any_violated = false;
        json ax = json::array();
        for (const std::string& id : axioms) {
            auto [entry, violated] = run_axiom(id, L, alloc, sat, alpha, a.relative_budget, caps);
            ax.push_back(entry);
            any_violated = any_violated || violated;
        }
        rep["axioms"] = ax;
        clock.lap("axioms");

        stage = "report";
        emit_report(rep, a.out);
        return any_violated ? kViolated : kOk;
    } catch (const pb::Error& e) {
        std::cerr << "error [" << stage << "]: " << e.what() << "\n";
        return code_for(e);
    }
}

int cmd_convert(const ConvertArgs& a) {
    if (a.to != "json" && a.to != "pb") {
        std::cerr << "error [usage]: --to must be json or pb\n";
        return kUsageErr;
    }
    Loaded L;
    try {
        L = load_election(a.file);
    } catch (const std::exception& e) {
        std::cerr << "error [parse]: " << e.what() << "\n";
        return kParseErr;
    }
    try {
        std::string text = a.to == "json" ? election_json(L.in, L.prof, L.meta).dump(2) + "\n"
                                          : serialize_pabulib(L.in, L.prof, L.meta);
        write_output(text, a.out);
        return kOk;
    } catch (const pb::Error& e) {
        std::cerr << "error [convert]: " << e.what() << "\n";
        return code_for(e);
    }
}

int cmd_dynamic(const DynamicArgs& a) {
    StageClock clock;
    Loaded L;
    try {
        L = load_election(a.file);
    } catch (const std::exception& e) {
        std::cerr << "error [parse]: " << e.what() << "\n";
        return kParseErr;
    }
    clock.lap("parse");
    try {
        auto mk = monotonicity_by_name(a.kind);
        if (!mk)
            throw pb::Error("BadArgument",
                            "--kind must be discount, limit, splitting, or merging");
        InstanceTransform t;
        switch (*mk) {
        case MonotonicityKind::Discount:
            if (a.project.empty() || a.new_cost.empty())
                throw pb::Error("BadArgument", "discount needs --project and --new-cost");
            t = InstanceTransform::discount(a.project, parse_rat(a.new_cost));
            break;
        case MonotonicityKind::Limit:
            if (a.new_budget.empty())
                throw pb::Error("BadArgument", "limit needs --new-budget");
            t = InstanceTransform::limit_raise(parse_rat(a.new_budget));
            break;
        case MonotonicityKind::Splitting: {
            if (a.project.empty() || a.parts.empty())
                throw pb::Error("BadArgument", "splitting needs --project and --parts id=cost,...");
            std::vector<std::pair<ProjectId, Rat>> parts;
            for (const std::string& item : split_list(a.parts)) {
                std::size_t eq = item.find('=');
                if (eq == std::string::npos)
                    throw pb::Error("BadArgument", "part '" + item + "' is not id=cost");
                parts.emplace_back(item.substr(0, eq), parse_rat(item.substr(eq + 1)));
            }
            t = InstanceTransform::split(a.project, std::move(parts));
            break;
        }
        case MonotonicityKind::Merging: {
            if (a.merged.empty() || a.merged_id.empty())
                throw pb::Error("BadArgument", "merging needs --merged ids and --merged-id");
            std::set<ProjectId> group;
            for (const std::string& id : split_list(a.merged)) group.insert(id);
            t = InstanceTransform::merge(std::move(group), a.merged_id);
            break;
        }
        }
        TieBreakOrder tb = make_tiebreak(L.in, a.tiebreak);
        std::optional<SatFn> sat = make_sat(a.sat, L.in, L.prof);
        RuleFn rule = build_rule(a.rule, sat, a.completion);
        MonotonicityReport mrep = check_monotonicity(rule, *mk, L.in, L.prof, t, tb);
        clock.lap("check");

        json rep;
        rep["election"] = election_fingerprint(L);
        rep["rule"] = rule_fingerprint(a.rule, a.sat, a.tiebreak, a.completion);
        json d;
        d["kind"] = a.kind;
        d["status"] = status_str(mrep.status);
        d["detail"] = mrep.detail;
        json before = json::array();
        for (int p : mrep.before.sel) before.push_back(L.in.id(p));
        d["before"] = before;
        json after = json::array();
        for (int p : mrep.after.sel) after.push_back(mrep.transformed.id(p));
        d["after"] = after;
        json tp = json::array();
        for (int p = 0; p < mrep.transformed.m(); ++p)
            tp.push_back(json{{"cost", rat_frac(mrep.transformed.cost(p))},
                              {"id", mrep.transformed.id(p)}});
        d["transformed"] = json{{"budget", rat_frac(mrep.transformed.budget())}, {"projects", tp}};
        rep["dynamic"] = d;
        emit_report(rep, a.out);
        return mrep.status == VerdictStatus::Violated ? kViolated : kOk;
    } catch (const pb::Error& e) {
        std::cerr << "error [dynamic]: " << e.what() << "\n";
        return code_for(e);
    }
}

int cmd_manipulate(const ManipArgs& a) {
    StageClock clock;
    Loaded L;
    try {
        L = load_election(a.file);
    } catch (const std::exception& e) {
        std::cerr << "error [parse]: " << e.what() << "\n";
        return kParseErr;
    }
    clock.lap("parse");
    try {
        EnumCaps caps = resolve_caps(a.max_n, a.max_m);
        TieBreakOrder tb = make_tiebreak(L.in, a.tiebreak);
        std::optional<SatFn> sat = make_sat(a.sat, L.in, L.prof);
        RuleFn rule = build_rule(a.rule, sat, a.completion);
        Alloc truthful = rule(L.in, L.prof, tb);
        auto found = find_manipulation(rule, L.in, L.prof, a.voter - 1, sat,
                                       a.mode == "approx", tb, caps);
        clock.lap("search");

        json rep;
        rep["election"] = election_fingerprint(L);
        rep["rule"] = rule_fingerprint(a.rule, a.sat, a.tiebreak, a.completion);
        rep["allocation"] = alloc_json(L.in, truthful);
        json man;
        man["found"] = bool(found);
        man["mode"] = a.mode;
        man["voter"] = a.voter;
        if (found) {
            man["ballot"] = ballot_json(L.in, found->ballot);
            man["gain"] = found->gain;
            json outcome = json::array();
            for (int p : found->manipulated.sel) outcome.push_back(L.in.id(p));
            man["outcome"] = outcome;
        }
        rep["manipulation"] = man;
        emit_report(rep, a.out);
        return found ? kViolated : kOk;
    } catch (const pb::Error& e) {
        std::cerr << "error [manipulate]: " << e.what() << "\n";
        return code_for(e);
    }
}

void add_common(CLI::App* cmd, CommonArgs& a, bool with_rule_flags) {
    cmd->add_option("file", a.file, "election file (.pb or .json)")->required();
    if (with_rule_flags) {
        cmd->add_option("--sat", a.sat, "satisfaction function (card, cost, cc, share, log, sqrt)");
        cmd->add_option("--tiebreak", a.tiebreak, "lex | file-order | explicit:<ids>");
        cmd->add_option("--completion", a.completion,
                        "greedy[:score|:score-per-cost] | budget-step | perturb");
    }
    cmd->add_option("--out", a.out, "write the JSON report here instead of stdout");
    cmd->add_option("--max-n", a.max_n, "voter cap for brute-force checkers");
    cmd->add_option("--max-m", a.max_m, "project cap for brute-force checkers");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"participatory budgeting: rules, audits, and format tools"};
    app.require_subcommand(1);

    ComputeArgs ca;
    auto* compute = app.add_subcommand("compute", "run a rule and report the outcome");
    add_common(compute, ca, true);
    compute->add_option("--rule", ca.rule, "rule id")->required();
    compute->add_option("--assert-project", ca.assert_project,
                        "exit 3 unless this project is selected");

    AuditArgs aa;
    auto* audit = app.add_subcommand("audit", "check axioms against an allocation");
    add_common(audit, aa, true);
    audit->add_option("--rule", aa.rule, "rule id producing the allocation");
    audit->add_option("--allocation", aa.allocation,
                      "comma-separated project ids to audit (empty string = empty allocation)");
    audit->add_option("--axioms", aa.axioms, "comma-separated axiom ids");
    audit->add_option("--alpha", aa.alpha, "approximation parameter for core variants");
    audit->add_flag("--relative-budget", aa.relative_budget,
                    "use the allocation cost instead of the budget in cohesiveness bounds");

    ConvertArgs va;
    auto* convert = app.add_subcommand("convert", "convert between .pb and JSON");
    convert->add_option("file", va.file, "election file (.pb or .json)")->required();
    convert->add_option("--to", va.to, "target format: json | pb")->required();
    convert->add_option("--out", va.out, "output path (stdout when absent)");

    DynamicArgs da;
    auto* dyn = app.add_subcommand("audit-dynamic", "check a monotonicity axiom for a rule");
    add_common(dyn, da, true);
    dyn->add_option("--rule", da.rule, "rule id")->required();
    dyn->add_option("--kind", da.kind, "discount | limit | splitting | merging")->required();
    dyn->add_option("--project", da.project, "focus project id");
    dyn->add_option("--new-cost", da.new_cost, "discounted cost");
    dyn->add_option("--new-budget", da.new_budget, "raised budget limit");
    dyn->add_option("--parts", da.parts, "split parts as id=cost,id=cost");
    dyn->add_option("--merged", da.merged, "comma-separated ids to merge");
    dyn->add_option("--merged-id", da.merged_id, "id of the merged project");

    ManipArgs ma;
    auto* man = app.add_subcommand("manipulate", "search for a profitable ballot deviation");
    add_common(man, ma, true);
    man->add_option("--rule", ma.rule, "rule id")->required();
    man->add_option("--voter", ma.voter, "1-based voter index")->required();
    man->add_option("--mode", ma.mode, "exact | approx")
        ->check(CLI::IsMember({"exact", "approx"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageErr;
    }

    aa.have_allocation = audit->count("--allocation") > 0;

    try {
        if (*compute) return cmd_compute(ca);
        if (*audit) return cmd_audit(aa);
        if (*convert) return cmd_convert(va);
        if (*dyn) return cmd_dynamic(da);
        if (*man) return cmd_manipulate(ma);
    } catch (const pb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageErr;
    }
    return kUsageErr;
}
