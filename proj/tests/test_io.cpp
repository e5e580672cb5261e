#include <catch_amalgamated.hpp>

#include "edgeworth/edgeworth.hpp"

using namespace edgeworth;
using Catch::Approx;

TEST_CASE("bound result serialization")
{
    const auto p = make_profile(1000, 9.0, std::nullopt, std::nullopt, std::nullopt, Setting::iid);
    const auto r = bound_EE1(p);
    const auto j = json::parse(to_json(r).dump());
    CHECK(j.at("total").get<double>() == r.total);
    CHECK(j.at("finite").get<bool>());
    CHECK(j.at("regime") == "iid_skew");
    CHECK(j.at("theorem") == "moment_only");
    REQUIRE(j.at("breakdown").size() == r.breakdown.size());
    double s = 0.0;
    for (const auto& t : j.at("breakdown"))
        s += t.at("value").get<double>();
    CHECK(s == Approx(r.total).epsilon(1e-14));
    CHECK(j.at("breakdown")[0].at("label") == "leading_0.1995");

    // key order is stable
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items())
        keys.push_back(k);
    CHECK(keys.front() == "total");
    CHECK(keys.back() == "reference");
}

TEST_CASE("non-finite values become null")
{
    BoundResult r;
    r.total = std::numeric_limits<double>::infinity();
    r.finite = false;
    r.remainder = std::numeric_limits<double>::quiet_NaN();
    r.breakdown.push_back({"overflow", std::numeric_limits<double>::infinity()});
    const auto text = to_json(r).dump();
    CHECK(text.find("inf") == std::string::npos);
    CHECK(text.find("nan") == std::string::npos);
    const auto j = json::parse(text);
    CHECK(j.at("total").is_null());
    CHECK(j.at("remainder").is_null());
    CHECK(j.at("breakdown")[0].at("value").is_null());
    CHECK_FALSE(j.at("finite").get<bool>());
}

TEST_CASE("other payloads")
{
    const auto c = chi1();
    const auto jc = to_json(c);
    CHECK(jc.at("name") == c.name);
    CHECK(jc.at("ok").get<bool>());
    CHECK(jc.at("derived_value").get<double>() == c.derived_value);

    const auto p = make_profile(1000, 9.0, std::nullopt, std::nullopt, std::nullopt, Setting::iid);
    const auto b = pvalue_bracket_delta(4.0, p, 0.2);
    const auto jb = to_json(b);
    CHECK(jb.at("clipped").get<bool>());
    CHECK(jb.at("lower").get<double>() == 0.0);
    CHECK(jb.at("raw_lower").get<double>() < 0.0);

    const auto v = classify_at(2.0, p, 1e-6);
    const auto jv = to_json(v);
    CHECK(jv.at("verdict") == to_string(v.verdict));
    CHECK(jv.at("x").get<double>() == 2.0);

    SupDistanceEstimate e{0.01, 0.001, 1000000, "grid"};
    const auto je = to_json(e);
    CHECK(je.at("reps").get<std::int64_t>() == 1000000);
    CHECK(je.at("grid_spec") == "grid");
}

TEST_CASE("profile field types are checked")
{
    CHECK_THROWS_AS(profile_from_json(json::parse(R"({"n": 100, "K4": "nine"})")), InvalidProfile);
    CHECK_THROWS_AS(profile_from_json(json::parse(R"({"n": 100, "K4": 9, "no_skew": "yes"})")), InvalidProfile);
    const auto p = profile_from_json(json::parse(R"({"n": 100, "K4": 9, "K3": null, "no_skew": true})"));
    CHECK(p.no_skew);
    CHECK(p.lambda3 == 0.0);
    CHECK(p.K3 == Approx(std::pow(9.0, 0.75)));
}
