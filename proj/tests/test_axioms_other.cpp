#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pb/axioms_other.hpp"
#include "pb/error.hpp"
#include "pb/rules_welfare.hpp"

#include "helpers.hpp"

using namespace pb;

namespace {

template <typename F>
std::string error_kind(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

RuleFn maxwel_card_rule() {
    return [](const Instance& in, const Profile& prof, const TieBreakOrder& tb) {
        return maximize_welfare(in, prof, WelfareObjective::util_sat(SatFn::card()), tb);
    };
}

RuleFn maxwel_cost_rule() {
    return [](const Instance& in, const Profile& prof, const TieBreakOrder& tb) {
        return maximize_welfare(in, prof, WelfareObjective::util_sat(SatFn::cost()), tb);
    };
}

RuleFn greedy_card_rule() {
    return [](const Instance& in, const Profile& prof, const TieBreakOrder& tb) {
        return greedy_welfare(in, prof, GreedyKey::ScorePerCost, tb);
    };
}

RuleFn greedy_cost_rule() {
    return [](const Instance& in, const Profile& prof, const TieBreakOrder& tb) {
        return greedy_welfare(in, prof, GreedyKey::Score, tb);
    };
}

RuleFn maxwel_util_rule() {
    return [](const Instance& in, const Profile& prof, const TieBreakOrder& tb) {
        return maximize_welfare(in, prof, WelfareObjective::util(), tb);
    };
}

}  // namespace

TEST_CASE("monotonicity kind names round trip") {
    for (MonotonicityKind k : {MonotonicityKind::Discount, MonotonicityKind::Limit,
                               MonotonicityKind::Splitting, MonotonicityKind::Merging}) {
        auto back = monotonicity_by_name(monotonicity_name(k));
        REQUIRE(back.has_value());
        CHECK(*back == k);
    }
    CHECK(!monotonicity_by_name("shrink").has_value());
}

TEST_CASE("discount transform") {
    auto [in, prof] = th::e1();
    auto [tin, tprof] = apply_transform(InstanceTransform::discount("p1", Rat(4)), in, prof);
    CHECK(tin.m() == 5);
    CHECK(tin.cost(0) == Rat(4));
    CHECK(tin.cost(1) == Rat(3));
    CHECK(tin.budget() == Rat(6));
    CHECK(tprof.ballots() == prof.ballots());

    CHECK(error_kind([&] { apply_transform(InstanceTransform::discount("p1", Rat(6)), in, prof); }) ==
          "InvalidTransform");
    CHECK(error_kind([&] { apply_transform(InstanceTransform::discount("p1", Rat(7)), in, prof); }) ==
          "InvalidTransform");
    CHECK(error_kind([&] { apply_transform(InstanceTransform::discount("p1", Rat(0)), in, prof); }) ==
          "InvalidTransform");
    CHECK(error_kind([&] { apply_transform(InstanceTransform::discount("zzz", Rat(1)), in, prof); }) ==
          "UnknownProject");
}

TEST_CASE("limit raise transform") {
    auto [in, prof] = th::e1();
    auto [tin, tprof] = apply_transform(InstanceTransform::limit_raise(Rat(8)), in, prof);
    CHECK(tin.budget() == Rat(8));
    CHECK(tin.cost(0) == Rat(6));
    CHECK(tprof.ballots() == prof.ballots());

    // Raising to the same limit is the rejected boundary case.
    CHECK(error_kind([&] { apply_transform(InstanceTransform::limit_raise(Rat(6)), in, prof); }) ==
          "InvalidTransform");
    CHECK(error_kind([&] { apply_transform(InstanceTransform::limit_raise(Rat(5)), in, prof); }) ==
          "InvalidTransform");
}

TEST_CASE("split transform") {
    auto [in, prof] = th::e1();
    auto t = InstanceTransform::split("p1", {{"q1", Rat(3)}, {"q2", Rat(3)}});
    auto [tin, tprof] = apply_transform(t, in, prof);
    REQUIRE(tin.m() == 6);
    CHECK(tin.id(0) == "q1");
    CHECK(tin.id(1) == "q2");
    CHECK(tin.id(2) == "p2");
    CHECK(tin.cost(0) == Rat(3));
    CHECK(tin.cost(1) == Rat(3));
    // Voter 1 approves both parts; others are untouched (indices shifted).
    CHECK(tprof.approval(0).approved == std::vector<int>{0, 1});
    CHECK(tprof.approval(1).approved == std::vector<int>{2});
    CHECK(tprof.approval(2).approved == std::vector<int>{3, 4, 5});

    CHECK(error_kind([&] {
              apply_transform(InstanceTransform::split("p1", {{"q1", Rat(2)}, {"q2", Rat(3)}}),
                              in, prof);
          }) == "InvalidTransform");
    CHECK(error_kind([&] {
              apply_transform(InstanceTransform::split("p1", {{"q1", Rat(6)}, {"q2", Rat(0)}}),
                              in, prof);
          }) == "InvalidTransform");
    CHECK(error_kind([&] {
              apply_transform(InstanceTransform::split("p1", {{"p2", Rat(3)}, {"q2", Rat(3)}}),
                              in, prof);
          }) == "InvalidTransform");
    CHECK(error_kind([&] {
              apply_transform(InstanceTransform::split("p1", {{"q1", Rat(3)}, {"q1", Rat(3)}}),
                              in, prof);
          }) == "InvalidTransform");
    CHECK(error_kind([&] { apply_transform(InstanceTransform::split("p1", {}), in, prof); }) ==
          "InvalidTransform");

    Profile card = th::cardinal_profile(in, {{Rat(1), Rat(0), Rat(0), Rat(0), Rat(0)}});
    CHECK(error_kind([&] { apply_transform(t, in, card); }) == "WrongProfileVariant");
}

TEST_CASE("merge transform") {
    auto [in, prof] = th::e1();
    auto t = InstanceTransform::merge({"p3", "p4", "p5"}, "q");
    auto [tin, tprof] = apply_transform(t, in, prof);
    REQUIRE(tin.m() == 3);
    CHECK(tin.id(0) == "p1");
    CHECK(tin.id(1) == "p2");
    CHECK(tin.id(2) == "q");
    CHECK(tin.cost(2) == Rat(3));
    CHECK(tprof.approval(0).approved == std::vector<int>{0});
    CHECK(tprof.approval(1).approved == std::vector<int>{1});
    CHECK(tprof.approval(2).approved == std::vector<int>{2});

    // p1 + p2 cost 9 > budget 6.
    CHECK(error_kind([&] {
              apply_transform(InstanceTransform::merge({"p1", "p2"}, "q"), in, prof);
          }) == "InvalidTransform");
    CHECK(error_kind([&] {
              apply_transform(InstanceTransform::merge({"p3", "p4"}, "p1"), in, prof);
          }) == "InvalidTransform");
    CHECK(error_kind([&] { apply_transform(InstanceTransform::merge({}, "q"), in, prof); }) ==
          "InvalidTransform");
    CHECK(error_kind([&] {
              apply_transform(InstanceTransform::merge({"zzz"}, "q"), in, prof);
          }) == "UnknownProject");

    Profile card = th::cardinal_profile(in, {{Rat(1), Rat(0), Rat(0), Rat(0), Rat(0)}});
    CHECK(error_kind([&] { apply_transform(t, in, card); }) == "WrongProfileVariant");
}

TEST_CASE("merging a split restores the instance up to renaming") {
    std::mt19937 rng(2024);
    for (int t = 0; t < 30; ++t) {
        th::Election e = th::rand_approval(rng, 4, 5);
        int p = th::rand_int(rng, 0, e.in.m() - 1);
        Rat half = e.in.cost(p) * rat_of(1, 2);
        auto [sin, sprof] = apply_transform(
            InstanceTransform::split(e.in.id(p), {{"z1", half}, {"z2", half}}), e.in, e.prof);
        auto [min_, mprof] = apply_transform(InstanceTransform::merge({"z1", "z2"}, "zz"), sin,
                                             sprof);
        REQUIRE(min_.m() == e.in.m());
        CHECK(min_.budget() == e.in.budget());
        for (int j = 0; j < e.in.m(); ++j) {
            CAPTURE(t);
            CAPTURE(j);
            CHECK(min_.cost(j) == e.in.cost(j));
            if (j != p) CHECK(min_.id(j) == e.in.id(j));
        }
        CHECK(min_.id(p) == "zz");
        for (int i = 0; i < e.prof.n(); ++i)
            CHECK(mprof.approval(i).approved == e.prof.approval(i).approved);
    }
}

TEST_CASE("discount monotonicity verdicts") {
    auto [in, prof] = th::e1();
    // Cost welfare keeps the cheaper flagship project.
    auto rep = check_monotonicity(maxwel_cost_rule(), MonotonicityKind::Discount, in, prof,
                                  InstanceTransform::discount("p1", Rat(5)),
                                  TieBreakOrder::lexicographic(in));
    CHECK(rep.status == VerdictStatus::Satisfied);
    CHECK(rep.before.sel == std::vector<int>{0});
    CHECK(rep.after.contains(0));

    // Discounting a project the rule never selected is not a test case.
    auto na = check_monotonicity(maxwel_cost_rule(), MonotonicityKind::Discount, in, prof,
                                 InstanceTransform::discount("p2", Rat(2)),
                                 TieBreakOrder::lexicographic(in));
    CHECK(na.status == VerdictStatus::Inapplicable);
    CHECK(na.detail.find("PreconditionUnmet") != std::string::npos);

    // Cost welfare drops a discounted project when its value falls under a
    // rival's: a 4 vs 3 duel at budget 4, discount the winner to 2.
    Instance duel({{"a", Rat(4)}, {"b", Rat(3)}}, Rat(4));
    Profile dprof = th::approval_profile(duel, {{"a"}, {"b"}});
    auto bad = check_monotonicity(maxwel_cost_rule(), MonotonicityKind::Discount, duel, dprof,
                                  InstanceTransform::discount("a", Rat(2)),
                                  TieBreakOrder::lexicographic(duel));
    CHECK(bad.status == VerdictStatus::Violated);
    CHECK(bad.before.sel == std::vector<int>{0});
    CHECK(!bad.after.contains(0));

    // Kind and transform variant must agree.
    CHECK(error_kind([&] {
              check_monotonicity(maxwel_cost_rule(), MonotonicityKind::Discount, in, prof,
                                 InstanceTransform::limit_raise(Rat(8)),
                                 TieBreakOrder::lexicographic(in));
          }) == "InvalidTransform");
}

TEST_CASE("limit monotonicity verdicts") {
    auto [in, prof] = th::e1();
    auto rep = check_monotonicity(maxwel_cost_rule(), MonotonicityKind::Limit, in, prof,
                                  InstanceTransform::limit_raise(Rat(7)),
                                  TieBreakOrder::lexicographic(in));
    CHECK(rep.status == VerdictStatus::Satisfied);
    CHECK(rep.before.sel == std::vector<int>{0});
    CHECK(rep.after.contains(0));

    // Cardinality welfare rebuilds its outcome from scratch at the higher
    // limit and drops a previously selected project.
    Instance sw({{"a", Rat(2)}, {"b", Rat(1)}, {"c", Rat(1)}}, Rat(2));
    Profile sprof = th::approval_profile(sw, {{"a"}, {"a"}, {"a"}, {"b"}, {"b"}, {"c"}, {"c"}});
    auto bad = check_monotonicity(maxwel_card_rule(), MonotonicityKind::Limit, sw, sprof,
                                  InstanceTransform::limit_raise(Rat(3)),
                                  TieBreakOrder::lexicographic(sw));
    CHECK(bad.status == VerdictStatus::Violated);
    CHECK(bad.before.sel == std::vector<int>{1, 2});
    CHECK(bad.after.sel == std::vector<int>{0, 1});

    // Identical reruns yield identical reports.
    auto again = check_monotonicity(maxwel_card_rule(), MonotonicityKind::Limit, sw, sprof,
                                    InstanceTransform::limit_raise(Rat(3)),
                                    TieBreakOrder::lexicographic(sw));
    CHECK(again.status == bad.status);
    CHECK(again.detail == bad.detail);
    CHECK(again.before.sel == bad.before.sel);
    CHECK(again.after.sel == bad.after.sel);
}

TEST_CASE("splitting monotonicity verdicts") {
    // A lone approved project split in two: both halves fit, a half survives.
    Instance solo({{"a", Rat(2)}}, Rat(2));
    Profile sprof = th::approval_profile(solo, {{"a"}});
    auto rep = check_monotonicity(maxwel_card_rule(), MonotonicityKind::Splitting, solo, sprof,
                                  InstanceTransform::split("a", {{"s1", Rat(1)}, {"s2", Rat(1)}}),
                                  TieBreakOrder::lexicographic(solo));
    CHECK(rep.status == VerdictStatus::Satisfied);

    // Approval-score greedy: the tie between a and b breaks toward a before
    // the split, but the parts' fresh ids sort after b, which then eats the
    // whole budget.
    Instance tie({{"a", Rat(2)}, {"b", Rat(2)}}, Rat(2));
    Profile tprof = th::approval_profile(tie, {{"a"}, {"a"}, {"b"}, {"b"}});
    auto bad = check_monotonicity(greedy_cost_rule(), MonotonicityKind::Splitting, tie, tprof,
                                  InstanceTransform::split("a", {{"c1", Rat(1)}, {"c2", Rat(1)}}),
                                  TieBreakOrder::lexicographic(tie));
    CHECK(bad.status == VerdictStatus::Violated);
    CHECK(bad.before.sel == std::vector<int>{0});
    CHECK(bad.after.id_set(bad.transformed) == std::set<ProjectId>{"b"});
}

TEST_CASE("merging monotonicity verdicts") {
    auto [in, prof] = th::e1();
    // Greedy per-cost selects all three small projects; their merge at equal
    // total cost still reads as the best deal.
    auto rep = check_monotonicity(greedy_card_rule(), MonotonicityKind::Merging, in, prof,
                                  InstanceTransform::merge({"p3", "p4", "p5"}, "q"),
                                  TieBreakOrder::lexicographic(in));
    CHECK(rep.status == VerdictStatus::Satisfied);
    CHECK(rep.before.sel == std::vector<int>{1, 2, 3, 4});
    CHECK(rep.after.id_set(rep.transformed).count("q") == 1);

    // Merging two cheap winners into one project loses the per-cost tiebreak
    // to a rival of equal ratio.
    Instance mg({{"a", Rat(1)}, {"b", Rat(1)}, {"c", Rat(2)}}, Rat(2));
    Profile mprof = th::approval_profile(mg, {{"a"}, {"b"}, {"c"}, {"c"}});
    auto bad = check_monotonicity(greedy_card_rule(), MonotonicityKind::Merging, mg, mprof,
                                  InstanceTransform::merge({"a", "b"}, "m"),
                                  TieBreakOrder::lexicographic(mg));
    CHECK(bad.status == VerdictStatus::Violated);
    CHECK(bad.before.sel == std::vector<int>{0, 1});
    CHECK(bad.after.id_set(bad.transformed) == std::set<ProjectId>{"c"});

    // A merge needs every member selected beforehand.
    auto na = check_monotonicity(maxwel_cost_rule(), MonotonicityKind::Merging, in, prof,
                                 InstanceTransform::merge({"p3", "p4", "p5"}, "q"),
                                 TieBreakOrder::lexicographic(in));
    CHECK(na.status == VerdictStatus::Inapplicable);
}

TEST_CASE("flagship manipulation by the small-project camp") {
    auto [in, prof] = th::e1();
    TieBreakOrder tb = TieBreakOrder::lexicographic(in);
    for (SatFn s : {SatFn::card(), SatFn::cost(), SatFn::sqrt_fn(), SatFn::log_fn()}) {
        CAPTURE(s.name());
        for (bool approx : {false, true}) {
            CAPTURE(approx);
            auto mf = find_manipulation(maxwel_cost_rule(), in, prof, 2, s, approx, tb);
            REQUIRE(mf.has_value());
            CHECK(std::get<ApprovalBallot>(mf->ballot).approved == std::vector<int>{1, 2, 3, 4});
            CHECK(mf->truthful.sel == std::vector<int>{0});
            CHECK(mf->manipulated.sel == std::vector<int>{1, 2, 3, 4});
            CHECK(!mf->gain.empty());
        }
    }
}

TEST_CASE("manipulation search edge cases") {
    auto [in, prof] = th::e1();
    TieBreakOrder tb = TieBreakOrder::lexicographic(in);
    CHECK(error_kind([&] {
              find_manipulation(maxwel_cost_rule(), in, prof, 2, std::nullopt, false, tb);
          }) == "MissingSatisfaction");
    CHECK(error_kind([&] {
              find_manipulation(maxwel_cost_rule(), in, prof, 7, SatFn::card(), false, tb);
          }) == "UnknownVoter");
    EnumCaps caps;
    caps.max_m = 3;
    CHECK(error_kind([&] {
              find_manipulation(maxwel_cost_rule(), in, prof, 2, SatFn::card(), false, tb, caps);
          }) == "CapExceeded");
    CHECK(error_kind([&] {
              find_manipulation(maxwel_cost_rule(), in, prof, 2, SatFn::card(), false, tb, caps);
          }) == "CapExceeded");

    std::vector<Ballot> ord = {OrdinalBallot{{0, 1, 2, 3, 4}}};
    Profile oprof(in, std::move(ord));
    CHECK(error_kind([&] {
              find_manipulation(maxwel_cost_rule(), in, oprof, 0, SatFn::card(), false, tb);
          }) == "WrongProfileVariant");

    // A single voter already gets their optimum from the welfare maximizer.
    Instance own = th::unit_instance(2, 2);
    Profile oneprof = th::approval_profile(own, {{"p1"}});
    CHECK(!find_manipulation(maxwel_card_rule(), own, oneprof, 0, SatFn::card(), false,
                             TieBreakOrder::lexicographic(own))
               .has_value());
}

TEST_CASE("cardinal manipulation over the documented grid") {
    Instance in({{"a", Rat(1)}, {"b", Rat(1)}}, Rat(1));
    Profile prof = th::cardinal_profile(in, {{Rat(2), Rat(1)}, {Rat(0), Rat(2)}});
    TieBreakOrder tb = TieBreakOrder::lexicographic(in);
    auto mf = find_manipulation(maxwel_util_rule(), in, prof, 0, std::nullopt, false, tb);
    REQUIRE(mf.has_value());
    // Zeroing the second score flips the welfare tie toward project a.
    CardinalBallot want;
    want.scores = {{0, Rat(2)}};
    CHECK(std::get<CardinalBallot>(mf->ballot).scores == want.scores);
    CHECK(mf->truthful.sel == std::vector<int>{1});
    CHECK(mf->manipulated.sel == std::vector<int>{0});
    CHECK(mf->gain == "score 1 -> 2");

    // Nine distinct scores push the permutation grid over the cap.
    Instance big = th::unit_instance(9, 9);
    std::vector<std::vector<Rat>> rows(1, std::vector<Rat>(9));
    for (int j = 0; j < 9; ++j) rows[0][j] = Rat(j + 1);
    Profile bigprof = th::cardinal_profile(big, rows);
    CHECK(error_kind([&] {
              find_manipulation(maxwel_util_rule(), big, bigprof, 0, std::nullopt, false,
                                TieBreakOrder::lexicographic(big));
          }) == "CapExceeded");
}

TEST_CASE("reported manipulation gains hold up independently") {
    // Seed the sample with an instance that is manipulable by construction:
    // voter 0 approves everything, a rival pushes the expensive project, and
    // dropping the expensive approval flips the optimum to the two cheap ones.
    std::vector<th::Election> sample;
    {
        Instance in({{"a", Rat(2)}, {"b", Rat(1)}, {"c", Rat(1)}}, Rat(2));
        std::vector<Ballot> bs;
        bs.push_back(ApprovalBallot{{0, 1, 2}});
        bs.push_back(ApprovalBallot{{0}});
        Profile prof(in, std::move(bs));
        sample.push_back(th::Election{std::move(in), std::move(prof)});
    }
    std::mt19937 rng(515);
    for (int t = 0; t < 40; ++t) sample.push_back(th::rand_approval(rng, 4, 4));

    int found = 0;
    for (std::size_t t = 0; t < sample.size(); ++t) {
        th::Election& e = sample[t];
        TieBreakOrder tb = TieBreakOrder::lexicographic(e.in);
        for (int voter = 0; voter < e.prof.n(); ++voter) {
            auto mf = find_manipulation(maxwel_card_rule(), e.in, e.prof, voter,
                                        SatFn::card(), false, tb);
            if (!mf) continue;
            ++found;
            const auto& truth = e.prof.approval(voter).approved;
            SatValue before = SatFn::card().of_set(e.in, th::inter(mf->truthful.sel, truth));
            SatValue after = SatFn::card().of_set(e.in, th::inter(mf->manipulated.sel, truth));
            CAPTURE(t);
            CAPTURE(voter);
            CHECK(after > before);
        }
    }
    CHECK(found > 0);
}

TEST_CASE("approval-score greedy resists approximate cost manipulation") {
    std::mt19937 rng(616);
    for (int t = 0; t < 30; ++t) {
        th::Election e = th::rand_approval(rng, 4, 4);
        TieBreakOrder tb = TieBreakOrder::lexicographic(e.in);
        for (int voter = 0; voter < e.prof.n(); ++voter) {
            CAPTURE(t);
            CAPTURE(voter);
            CHECK(!find_manipulation(greedy_cost_rule(), e.in, e.prof, voter, SatFn::cost(),
                                     true, tb)
                       .has_value());
        }
    }
}

TEST_CASE("weak proportionality probe") {
    auto [in1, prof1] = th::e1();
    Verdict na = check_weak_proportionality(in1, prof1, make_alloc(in1, {0}));
    CHECK(na.status == VerdictStatus::Inapplicable);  // not unit-cost

    auto [in3, prof3] = th::e3();
    CHECK(check_weak_proportionality(in3, prof3, make_alloc(in3, {0, 1})).ok());
    Verdict v = check_weak_proportionality(in3, prof3, make_alloc(in3, {0}));
    CHECK(v.status == VerdictStatus::Violated);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->group == std::vector<int>{1});
    CHECK(v.witness->extra == 1);

    auto [in2, prof2] = th::e2();
    CHECK(check_weak_proportionality(in2, prof2, make_alloc(in2, {0})).status ==
          VerdictStatus::Inapplicable);  // overlapping distinct supports

    Instance cu = th::unit_instance(2, 1);
    Profile cprof = th::cardinal_profile(cu, {{Rat(2), Rat(0)}, {Rat(1), Rat(0)}});
    CHECK(check_weak_proportionality(cu, cprof, make_alloc(cu, {0})).ok());
    Verdict cv = check_weak_proportionality(cu, cprof, make_alloc(cu, {}));
    CHECK(cv.status == VerdictStatus::Violated);
    REQUIRE(cv.witness.has_value());
    CHECK(cv.witness->group == std::vector<int>{0, 1});

    std::vector<Ballot> ord = {OrdinalBallot{{0, 1}}};
    Profile oprof(cu, std::move(ord));
    CHECK(error_kind([&] { check_weak_proportionality(cu, oprof, make_alloc(cu, {})); }) ==
          "WrongProfileVariant");
}
