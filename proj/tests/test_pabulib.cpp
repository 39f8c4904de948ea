#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "pb/error.hpp"
#include "pb/pabulib.hpp"

#include "helpers.hpp"

using namespace pb;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

template <typename F>
std::string error_info(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind() + ": " + e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("parses the approval example file") {
    ParseResult r = parse_pabulib(slurp(th::data_path("e1.pb")));
    CHECK(r.warnings.empty());
    CHECK(r.instance.m() == 5);
    CHECK(r.instance.budget() == Rat(6));
    CHECK(r.instance.cost(r.instance.index("p1")) == Rat(6));
    CHECK(r.profile.n() == 3);
    CHECK(r.profile.kind() == BallotKind::Approval);
    CHECK(r.profile.approval(2).approved == std::vector<int>{2, 3, 4});
    REQUIRE(r.meta.find("vote_type") != nullptr);
    CHECK(*r.meta.find("vote_type") == "approval");

    auto [in, prof] = th::e1();
    CHECK(r.instance == in);
    CHECK(r.profile == prof);
}

TEST_CASE("empty votes produce empty approval ballots") {
    ParseResult r = parse_pabulib(slurp(th::data_path("half_support.pb")));
    CHECK(r.profile.n() == 2);
    CHECK(r.profile.approval(0).approved == std::vector<int>{0});
    CHECK(r.profile.approval(1).approved.empty());
}

TEST_CASE("ordinal files keep listed order as the ranking") {
    std::string text =
        "META\nkey;value\nnum_projects;3\nnum_votes;2\nbudget;5\nvote_type;ordinal\n"
        "PROJECTS\nproject_id;cost\na;2\nb;3\nc;1\n"
        "VOTES\nvoter_id;vote\n1;c,a\n2;b,c,a\n";
    ParseResult r = parse_pabulib(text);
    CHECK(r.profile.kind() == BallotKind::Ordinal);
    CHECK(r.profile.ordinal(0).ranking == std::vector<int>{2, 0});
    CHECK(r.profile.ordinal(1).ranking == std::vector<int>{1, 2, 0});
}

TEST_CASE("cumulative points normalize by max_sum_points when present") {
    std::string text =
        "META\nkey;value\nnum_projects;2\nnum_votes;2\nbudget;5\nvote_type;cumulative\n"
        "max_sum_points;10\n"
        "PROJECTS\nproject_id;cost\na;2\nb;3\n"
        "VOTES\nvoter_id;vote;points\n1;a,b;6,4\n2;a;5\n";
    ParseResult r = parse_pabulib(text);
    CHECK(r.profile.kind() == BallotKind::Cumulative);
    CHECK(r.profile.cumulative(0).weight(0) == rat_of(3, 5));
    CHECK(r.profile.cumulative(0).weight(1) == rat_of(2, 5));
    // Voter 2 used only half the allowance; the slack stays unspent.
    CHECK(r.profile.cumulative(1).weight(0) == rat_of(1, 2));
}

TEST_CASE("cumulative points normalize by own total without max_sum_points") {
    std::string text =
        "META\nkey;value\nnum_projects;2\nnum_votes;1\nbudget;5\nvote_type;cumulative\n"
        "PROJECTS\nproject_id;cost\na;2\nb;3\n"
        "VOTES\nvoter_id;vote;points\n1;a,b;6,2\n";
    ParseResult r = parse_pabulib(text);
    CHECK(r.profile.cumulative(0).weight(0) == rat_of(3, 4));
    CHECK(r.profile.cumulative(0).weight(1) == rat_of(1, 4));
}

TEST_CASE("scoring files become cardinal ballots with zeros dropped") {
    std::string text =
        "META\nkey;value\nnum_projects;3\nnum_votes;1\nbudget;5\nvote_type;scoring\n"
        "PROJECTS\nproject_id;cost\na;2\nb;3\nc;1\n"
        "VOTES\nvoter_id;vote;points\n1;a,b,c;3,0,1\n";
    ParseResult r = parse_pabulib(text);
    CHECK(r.profile.kind() == BallotKind::Cardinal);
    CHECK(r.profile.cardinal(0).scores ==
          std::vector<std::pair<int, Rat>>{{0, Rat(3)}, {2, Rat(1)}});
}

TEST_CASE("projects over budget are dropped with a warning") {
    std::string text =
        "META\nkey;value\nnum_projects;2\nnum_votes;1\nbudget;5\nvote_type;approval\n"
        "PROJECTS\nproject_id;cost\nbig;9\nok;2\n"
        "VOTES\nvoter_id;vote\n1;big,ok\n";
    ParseResult r = parse_pabulib(text);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("big") != std::string::npos);
    CHECK(r.instance.m() == 1);
    CHECK(r.profile.approval(0).approved == std::vector<int>{0});
}

TEST_CASE("parse errors carry line numbers") {
    // Bad cost on line 9.
    std::string bad_cost =
        "META\nkey;value\nnum_projects;1\nnum_votes;1\nbudget;5\nvote_type;approval\n"
        "PROJECTS\nproject_id;cost\na;x\n"
        "VOTES\nvoter_id;vote\n1;a\n";
    std::string info = error_info([&] { parse_pabulib(bad_cost); });
    CHECK(info.find("MalformedNumber") != std::string::npos);
    CHECK(info.find("9") != std::string::npos);

    std::string no_votes =
        "META\nkey;value\nnum_projects;1\nnum_votes;1\nbudget;5\nvote_type;approval\n"
        "PROJECTS\nproject_id;cost\na;2\n";
    CHECK(error_info([&] { parse_pabulib(no_votes); }).find("MissingSection") !=
          std::string::npos);

    std::string bad_type =
        "META\nkey;value\nnum_projects;1\nnum_votes;1\nbudget;5\nvote_type;ranked\n"
        "PROJECTS\nproject_id;cost\na;2\nVOTES\nvoter_id;vote\n1;a\n";
    CHECK(error_info([&] { parse_pabulib(bad_type); }).find("UnknownVoteType") !=
          std::string::npos);

    std::string no_cost_col =
        "META\nkey;value\nnum_projects;1\nnum_votes;1\nbudget;5\nvote_type;approval\n"
        "PROJECTS\nproject_id;price\na;2\nVOTES\nvoter_id;vote\n1;a\n";
    CHECK(error_info([&] { parse_pabulib(no_cost_col); }).find("MissingColumn") !=
          std::string::npos);
}

TEST_CASE("CRLF input parses the same as LF") {
    std::string lf = slurp(th::data_path("e3.pb"));
    std::string crlf;
    for (char c : lf) {
        if (c == '\n') crlf += '\r';
        crlf += c;
    }
    ParseResult a = parse_pabulib(lf);
    ParseResult b = parse_pabulib(crlf);
    CHECK(a.instance == b.instance);
    CHECK(a.profile == b.profile);
    CHECK(a.meta == b.meta);
}

TEST_CASE("serialize then parse is the identity on all stored fixtures") {
    for (const char* name :
         {"e1.pb", "e2.pb", "e3.pb", "e5.pb", "half_support.pb",
          "poland_warszawa_2019_ursynow.pb", "poland_gdynia_2020_district.pb",
          "poland_krakow_2021_ordinal.pb", "france_toulouse_2019_cumulative.pb",
          "poland_wieliczka_2023_scoring.pb"}) {
        CAPTURE(name);
        ParseResult r1 = parse_pabulib(slurp(th::data_path(name)));
        CHECK(r1.warnings.empty());
        std::string out = serialize_pabulib(r1.instance, r1.profile, r1.meta);
        ParseResult r2 = parse_pabulib(out);
        CHECK(r1.instance == r2.instance);
        CHECK(r1.profile == r2.profile);
        CHECK(r1.meta == r2.meta);
        // Serialization is a fixed point once normalized.
        CHECK(serialize_pabulib(r2.instance, r2.profile, r2.meta) == out);
    }
}

TEST_CASE("metadata side table preserves extra columns") {
    ParseResult r = parse_pabulib(slurp(th::data_path("poland_warszawa_2019_ursynow.pb")));
    auto it = r.meta.extra.find("project:2019_1:name");
    REQUIRE(it != r.meta.extra.end());
    CHECK(it->second == "Zielony skwer przy metrze");
    CHECK(r.meta.extra.count("vote:101:age") == 1);
    CHECK(r.meta.extra.at("vote:101:age") == "34");
}

TEST_CASE("serialize rejects inconsistent inputs") {
    auto [in, prof] = th::e3();
    ElectionMetadata meta;
    meta.set("vote_type", "ordinal");  // profile is approval
    CHECK(error_info([&] { serialize_pabulib(in, prof, meta); }).find("InconsistentInputs") !=
          std::string::npos);

    Profile weak(in, {WeakOrdinalBallot{{{0, 1}}}});
    ElectionMetadata none;
    CHECK(error_info([&] { serialize_pabulib(in, weak, none); }).find("InconsistentInputs") !=
          std::string::npos);
}
