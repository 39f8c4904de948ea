#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pb/error.hpp"
#include "pb/satisfaction.hpp"

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

}  // namespace

TEST_CASE("satvalue comparisons") {
    SatValue two = SatValue::lin(Rat(2));
    SatValue three = SatValue::lin(Rat(3));
    CHECK(two < three);
    CHECK(two == SatValue::lin(Rat(2)));

    // Lin vs Sqrt compares by squaring: 2 < sqrt(5)? 4 < 5 yes.
    CHECK(two < SatValue::sqrt_of(Rat(5)));
    CHECK(two > SatValue::sqrt_of(Rat(3)));
    CHECK(two == SatValue::sqrt_of(Rat(4)));
    CHECK(SatValue::sqrt_of(Rat(2)) < SatValue::sqrt_of(Rat(3)));

    // Log compares with Log; zero compares with everything.
    CHECK(SatValue::log_of(Rat(2)) < SatValue::log_of(Rat(3)));
    CHECK(SatValue() < SatValue::log_of(Rat(2)));
    CHECK(SatValue() < SatValue::sqrt_of(Rat(1)));
    CHECK(SatValue::log_of(Rat(1)) == SatValue());  // log(1) = 0 normalizes to Lin

    CHECK(error_kind([] { (void)(SatValue::log_of(Rat(2)) < SatValue::lin(Rat(1))); }) ==
          "IncomparableScales");
    CHECK(error_kind([] { SatValue::sqrt_of(Rat(-1)); }) == "BadSatValue");
    CHECK(error_kind([] { SatValue::log_of(rat_of(1, 2)); }) == "BadSatValue");
}

TEST_CASE("satvalue algebra") {
    CHECK(SatValue::lin(Rat(2)) + SatValue::lin(Rat(3)) == SatValue::lin(Rat(5)));
    // log(a) + log(b) = log(ab)
    CHECK(SatValue::log_of(Rat(2)) + SatValue::log_of(Rat(3)) == SatValue::log_of(Rat(6)));
    // 2 * sqrt(3) = sqrt(12)
    CHECK(SatValue::lin(Rat(2)) * SatValue::sqrt_of(Rat(3)) == SatValue::sqrt_of(Rat(12)));
    CHECK(SatValue::sqrt_of(Rat(2)) * SatValue::sqrt_of(Rat(8)) == SatValue::lin(Rat(4)));
    CHECK(SatValue::lin(Rat(2)) * SatValue::lin(Rat(3)) == SatValue::lin(Rat(6)));
    // Adding zero works on any scale.
    CHECK(SatValue() + SatValue::sqrt_of(Rat(2)) == SatValue::sqrt_of(Rat(2)));
    CHECK(SatValue::sqrt_of(Rat(2)) + SatValue() == SatValue::sqrt_of(Rat(2)));

    CHECK(error_kind([] { SatValue::lin(Rat(1)) + SatValue::sqrt_of(Rat(2)); }) ==
          "UnsupportedSatisfactionAlgebra");
    CHECK(error_kind([] { SatValue::log_of(Rat(2)) * SatValue::log_of(Rat(2)); }) ==
          "UnsupportedSatisfactionAlgebra");
    CHECK(error_kind([] { SatValue::lin(Rat(2)) + SatValue::log_of(Rat(2)); }) ==
          "UnsupportedSatisfactionAlgebra");
}

TEST_CASE("satvalue rendering") {
    CHECK(SatValue::lin(rat_of(3, 2)).str() == "3/2");
    CHECK(SatValue::sqrt_of(Rat(2)).str() == "sqrt(2)");
    CHECK(SatValue::log_of(rat_of(27, 8)).str() == "log(27/8)");
    CHECK(SatValue().str() == "0");
    CHECK(SatValue::lin(Rat(2)).approx() == doctest::Approx(2.0));
    CHECK(SatValue::sqrt_of(Rat(2)).approx() == doctest::Approx(std::sqrt(2.0)));
    CHECK(SatValue::log_of(Rat(8)).approx() == doctest::Approx(std::log(8.0)));
}

TEST_CASE("built in satisfaction functions") {
    auto [in, prof] = th::e1();
    std::vector<int> P = {1, 2};  // p2 (cost 3), p3 (cost 1)

    CHECK(SatFn::card().of_set(in, P) == SatValue::lin(Rat(2)));
    CHECK(SatFn::cost().of_set(in, P) == SatValue::lin(Rat(4)));
    CHECK(SatFn::cc().of_set(in, P) == SatValue::lin(Rat(1)));
    CHECK(SatFn::cc().of_set(in, {}) == SatValue());
    CHECK(SatFn::sqrt_fn().of_set(in, P) == SatValue::sqrt_of(Rat(4)));
    CHECK(SatFn::log_fn().of_set(in, P) == SatValue::log_of(Rat(5)));  // log(1 + 4)
    CHECK(SatFn::card().of_set(in, {}).is_zero());
    CHECK(SatFn::cost().singleton(in, 0) == SatValue::lin(Rat(6)));

    SatFn add = SatFn::additive(in, {{"p1", Rat(5)}, {"p3", rat_of(1, 2)}});
    CHECK(add.of_set(in, {0, 2}) == SatValue::lin(rat_of(11, 2)));
    CHECK(add.of_set(in, {1}) == SatValue());

    // share: p1 has 1 supporter, p3/p4/p5 one each, p2 one.
    SatFn share = SatFn::share(in, prof);
    CHECK(share.of_set(in, {0}) == SatValue::lin(Rat(6)));          // 6/1
    CHECK(share.of_set(in, {2, 3}) == SatValue::lin(Rat(2)));       // 1/1 + 1/1

    auto [in2, prof2] = th::e2();
    SatFn share2 = SatFn::share(in2, prof2);
    // p1 has supporters {1,4}: share 1/2.
    CHECK(share2.of_set(in2, {0}) == SatValue::lin(rat_of(1, 2)));

    CHECK(error_kind([&] { SatFn::by_name("nope", in, &prof); }) == "UnknownSatisfaction");
    CHECK(SatFn::by_name("card", in, nullptr).kind() == SatKind::Card);
    CHECK(SatFn::by_name("share", in, &prof).kind() == SatKind::Share);
    CHECK(std::string(SatFn::cost().name()) == "cost");
}

TEST_CASE("satisfaction traits") {
    auto [in, prof] = th::e1();
    CHECK(SatFn::card().additive_over_projects());
    CHECK(SatFn::cost().additive_over_projects());
    CHECK(!SatFn::cc().additive_over_projects());
    CHECK(!SatFn::sqrt_fn().additive_over_projects());
    CHECK(!SatFn::log_fn().additive_over_projects());
    CHECK(SatFn::share(in, prof).additive_over_projects());

    CHECK(SatFn::card().strictly_increasing());
    CHECK(SatFn::cost().strictly_increasing());
    CHECK(!SatFn::cc().strictly_increasing());
    CHECK(SatFn::sqrt_fn().strictly_increasing());
    CHECK(SatFn::log_fn().strictly_increasing());
}

TEST_CASE("evaluate intersects the allocation with the ballot") {
    auto [in, prof] = th::e1();
    Alloc a = make_alloc(in, {1, 2, 3, 4});
    CHECK(evaluate(SatFn::card(), prof.approval(2), a, in) == SatValue::lin(Rat(3)));
    CHECK(evaluate(SatFn::cost(), prof.approval(0), a, in).is_zero());
    CHECK(evaluate(SatFn::cc(), prof.approval(1), a, in) == SatValue::lin(Rat(1)));
}

TEST_CASE("dns classification") {
    auto [in, prof] = th::e1();
    CHECK(is_dns(SatFn::card(), in));
    CHECK(is_dns(SatFn::cost(), in));
    CHECK(is_dns(SatFn::cc(), in));
    CHECK(is_dns(SatFn::sqrt_fn(), in));
    CHECK(is_dns(SatFn::log_fn(), in));

    // share can break the monotone half: a cheap project with one supporter
    // yields more than an expensive one with many.
    auto [in2, prof2] = th::e2();
    SatFn share2 = SatFn::share(in2, prof2);
    // Unit costs: s(p) equal cost means monotone trivially; share still DNS here.
    CHECK(is_dns(share2, in2));
    // Non-unit: p1 cost 6 with 1 supporter (value 6), p2 cost 3 value 3 — fine;
    // build one where value decreases with cost: additive with inverted values.
    SatFn bad = SatFn::additive(in, {{"p1", Rat(1)}, {"p2", Rat(5)}});
    CHECK(!is_dns(bad, in));
    // Per-unit ratio must also be nonincreasing in cost.
    SatFn ratio_bad = SatFn::additive(in, {{"p3", Rat(1)}, {"p1", Rat(50)}});
    CHECK(!is_dns(ratio_bad, in));
}

TEST_CASE("relative satisfaction") {
    auto [in, prof] = th::e1();
    // Voter 3 approves p3,p4,p5 (cost 1 each); best feasible approved set has
    // all three. Allocation {p2,p3} gives them one of three.
    Alloc a = make_alloc(in, {1, 2});
    CHECK(relative_satisfaction(SatFn::card(), prof.approval(2), a, in) == rat_of(1, 3));
    CHECK(relative_satisfaction(SatFn::cost(), prof.approval(2), a, in) == rat_of(1, 3));
    CHECK(relative_satisfaction(SatFn::cc(), prof.approval(2), a, in) == Rat(1));

    // Best feasible approved subset can be capped by the budget: voter approving
    // p1 (6) and p2 (3) with budget 6 can get at most cost 6.
    Instance in2({{"p1", Rat(6)}, {"p2", Rat(3)}}, Rat(6));
    ApprovalBallot b{{0, 1}};
    Alloc only2 = make_alloc(in2, {1});
    CHECK(relative_satisfaction(SatFn::cost(), b, only2, in2) == rat_of(1, 2));

    CHECK(error_kind([&] {
              relative_satisfaction(SatFn::card(), ApprovalBallot{}, a, in);
          }) == "EmptyApprovalSet");
    CHECK(error_kind([&] {
              relative_satisfaction(SatFn::sqrt_fn(), prof.approval(2), a, in);
          }) == "UnsupportedSatisfactionAlgebra");
}

TEST_CASE("positional scoring vectors") {
    auto [in, prof] = th::e1();  // m = 5
    std::vector<Rat> borda = {Rat(4), Rat(3), Rat(2), Rat(1), Rat(0)};

    OrdinalBallot strict{{2, 0, 4}};  // p3 > p1 > p5
    CardinalBallot c = positional_cardinal(strict, borda, in);
    CHECK(c.score(2) == Rat(4));
    CHECK(c.score(0) == Rat(3));
    CHECK(c.score(4) == Rat(2));
    CHECK(c.score(1) == 0);

    // Weak classes take the mean of the spanned entries: {p1,p2} spans
    // positions 0,1 -> (4+3)/2, then {p3} takes position 2 -> 2.
    WeakOrdinalBallot weak{{{0, 1}, {2}}};
    CardinalBallot w = positional_cardinal(weak, borda, in);
    CHECK(w.score(0) == rat_of(7, 2));
    CHECK(w.score(1) == rat_of(7, 2));
    CHECK(w.score(2) == Rat(2));
    CHECK(w.score(3) == 0);

    // Short vectors zero-pad.
    std::vector<Rat> top1 = {Rat(1)};
    CardinalBallot t = positional_cardinal(strict, top1, in);
    CHECK(t.score(2) == Rat(1));
    CHECK(t.score(0) == 0);
}
